//! `gakit` — scriptable verification runs over presented algebras: check
//! exponential maps, compute truncated invariants, build associated graded
//! presentations, search map templates, count points and emit geometric
//! certificates. Reports are JSON on stdout and deterministic for identical
//! inputs; timing goes to stderr. Exit codes: 0 verified/pass, 1
//! refuted/fail, 2 usage or input error.

mod args;
mod commands;
mod report;

use args::Args;
use commands::Ctx;
use report::Report;
use std::time::Instant;

const USAGE: &str = "usage: gakit <command> [--flag value ...]

commands:
  normalize    --algebra A --poly EXPR
  check-exp    --map M [--algebra A]
  invariants   --map M [--algebra A] --degree-bound D
  gr           --algebra A --weights W
  lead         --algebra A --weights W --poly EXPR
  degree       --algebra A --weights W --poly EXPR
  induce-gr    --map M [--algebra A] --weights W
  search       --algebra A --template T
  derksen      (--algebra A --map M1 [--map M2 ...] | --translations N --p P) --degree-bound D
  count-points (--algebra A | --asanuma p=..,m=..,e=..,s=.. | --batch LIST) [--q Q] [--method brute|stratified|both] [--jobs N]
  singular     --p P --vars V1,V2,.. --poly EXPR --point V1=..,V2=.. [--q Q]
  smooth       (--algebra A | --asanuma p=..,m=..,e=..,s=..)
  verify-iso   --source A --target B --fwd F --bwd G
  selftest

Flags taking A/M/W/T accept a file path or inline JSON (starting with `{`).
Output: one JSON report on stdout (`--format text` for a flat rendering).";

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let started = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help" {
        eprintln!("{USAGE}");
        return 2;
    }
    let args = match Args::parse(argv.into_iter()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{USAGE}");
            return 2;
        }
    };

    let mut ctx = Ctx::new(&args);
    let result = match args.command.as_str() {
        "normalize" => commands::cmd_normalize(&mut ctx),
        "check-exp" => commands::cmd_check_exp(&mut ctx),
        "invariants" => commands::cmd_invariants(&mut ctx),
        "gr" => commands::cmd_gr(&mut ctx),
        "lead" => commands::cmd_lead(&mut ctx),
        "degree" => commands::cmd_degree(&mut ctx),
        "induce-gr" => commands::cmd_induce_gr(&mut ctx),
        "search" => commands::cmd_search(&mut ctx),
        "derksen" => commands::cmd_derksen(&mut ctx),
        "count-points" => commands::cmd_count_points(&mut ctx),
        "singular" => commands::cmd_singular(&mut ctx),
        "smooth" => commands::cmd_smooth(&mut ctx),
        "verify-iso" => commands::cmd_verify_iso(&mut ctx),
        "selftest" => commands::cmd_selftest(&mut ctx),
        other => {
            eprintln!("error: unknown command `{other}`");
            eprintln!("{USAGE}");
            return 2;
        }
    };

    let format = args.get("format").unwrap_or("json");
    if !matches!(format, "json" | "text") {
        eprintln!("error: `--format` must be json or text, got `{format}`");
        return 2;
    }

    match result {
        Ok((payload, exit)) => {
            let report = Report { command: args.command.clone(), inputs: ctx.inputs, payload };
            match format {
                "text" => println!("{}", report.to_text()),
                _ => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
            }
            eprintln!("wall_ms={}", started.elapsed().as_millis());
            exit
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            2
        }
    }
}
