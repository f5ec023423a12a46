//! Classical fixed-step fourth-order Runge-Kutta for autonomous systems.

/// Default step size.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Smallest step count keeping the step at or below [`DEFAULT_STEP`].
pub fn required_steps(t: f64) -> usize {
    (t.abs() / DEFAULT_STEP - 1e-9).ceil().max(0.0) as usize
}

/// Integrates `y' = field(y)` from `y0` over time `t` in `steps` equal steps.
pub fn rk4<F>(field: F, y0: &[f64], t: f64, steps: usize) -> Vec<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    if steps == 0 || t == 0.0 {
        return y;
    }
    let h = t / steps as f64;
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    for _ in 0..steps {
        field(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        field(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        field(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        field(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = rk4(|y, dy| dy[0] = y[0], &[1.0], 1.0, 1000);
        assert!((y[0] - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn harmonic_oscillator_period() {
        let y = rk4(
            |y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[1.0, 0.0],
            std::f64::consts::TAU,
            4000,
        );
        assert!((y[0] - 1.0).abs() < 1e-11 && y[1].abs() < 1e-11);
    }

    #[test]
    fn step_floor() {
        assert_eq!(required_steps(1.0), 1000);
        assert_eq!(required_steps(-0.3), 300);
        assert_eq!(required_steps(0.0), 0);
        assert_eq!(required_steps(0.0015), 2);
    }
}
