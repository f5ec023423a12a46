#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_confdyn");

/// One invocation of every leaf subcommand, with the exit code it must produce.
/// `{out}` is replaced by the artifact path.
pub const SCRIPT: &[(&str, i32)] = &[
    ("rotation solve --max-freq 32 --seed 3 --out {out}", 0),
    ("rotation solve --mean 0.1 --out {out}", 2),
    ("rotation birkhoff --K 500 --seed 1 --format csv --out {out}", 0),
    ("rotation gh-test --K 10000 --seed 2 --out {out}", 0),
    ("rotation gh-test --K 10000 --seed 2 --mean 0.1 --out {out}", 2),
    ("rotation counterexample --J 8 --out {out}", 0),
    ("rotation counterexample --J 8 --precision-bits 100 --out {out}", 4),
    ("rotation regularity --terms 1:0.5:0,4:0:-0.25 --eval-at 0,0.125 --format csv --out {out}", 0),
    ("flows verify --flow H --t 1 --samples 100 --seed 0 --out {out}", 0),
    ("flows verify --flow volume --n 2 --t 1 --samples 10 --seed 0 --out {out}", 0),
    ("flows integrate --flow F --n 1 --t 1 --point 0.1,-0.2,0.3 --out {out}", 0),
    ("flows integrate --flow volume --n 2 --t 1 --point 0.1,-0.2 --format csv --out {out}", 0),
    ("obstruction find-fixed --flow F --t 1 --seeds 10 --seed 4 --out {out}", 0),
    ("obstruction check --flow F --t 1 --point 0,0,0 --m 1 --out {out}", 2),
    ("obstruction check --flow reeb --t 0.25 --point 0.1,0.2,0.3 --out {out}", 0),
    ("constraint average --expr zero --resolution 16 --out {out}", 0),
    ("constraint average --expr const:0.1 --out {out}", 2),
    ("constraint average --form dz --resolution 8 --out {out}", 4),
    ("constraint jensen --expr neg-bump:0.3 --resolution 16 --out {out}", 2),
    ("constraint jensen --expr sin-x:0.3 --resolution 16 --format csv --out {out}", 0),
    ("rotation frobnicate", 3),
    ("flows verify --flow nope --out {out}", 3),
    ("obstruction check --flow F --point 0,0 --out {out}", 3),
    ("constraint average --expr zero --bogus-flag 1", 3),
];

pub fn argv(line: &str, out: &Path) -> Vec<String> {
    line.split_whitespace()
        .map(|w| w.replace("{out}", &out.display().to_string()))
        .collect()
}

pub fn run(args: &[String]) -> (i32, Vec<u8>) {
    let output = Command::new(BIN).args(args).output().expect("binary runs");
    (output.status.code().unwrap_or(-1), output.stdout)
}

/// Leaf subcommands (`group leaf`) exercised by [`SCRIPT`] with a computed result.
pub fn covered_subcommands() -> Vec<String> {
    let mut subs: Vec<String> = SCRIPT
        .iter()
        .filter(|(_, code)| *code != 3)
        .map(|(line, _)| line.split_whitespace().take(2).collect::<Vec<_>>().join(" "))
        .collect();
    subs.sort();
    subs.dedup();
    subs
}
