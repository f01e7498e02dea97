mod cli;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::args::Cli;
use cli::{Ctx, Output, RunManifest};

fn error_name(e: &dimlab::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx::default();
    let result = cli::run(&cli, &mut ctx).and_then(|out| {
        let body = match out {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            Output::Text(t) => t,
        };
        match &cli.out {
            Some(p) => std::fs::write(p, &body).map_err(|e| dimlab::Error::Io(format!("{}: {e}", p.display()))),
            None => std::io::stdout().write_all(body.as_bytes()).map_err(dimlab::Error::from),
        }
    });
    let mut outputs: Vec<String> = match &cli.out {
        Some(p) => vec![p.display().to_string()],
        None => vec!["-".into()],
    };
    outputs.extend(ctx.extra_outputs.iter().map(|p| p.display().to_string()));
    let manifest = RunManifest {
        tool: "dimlab",
        version: env!("CARGO_PKG_VERSION"),
        command: std::env::args().collect(),
        seed: cli.seed,
        inputs: std::mem::take(&mut ctx.inputs),
        outputs,
    };
    let m = serde_json::to_string(&manifest).expect("serializable");
    match &cli.out {
        Some(p) => {
            let mp = format!("{}.manifest.json", p.display());
            if let Err(e) = std::fs::write(&mp, m + "\n") {
                eprintln!("cannot write manifest {mp}: {e}");
            }
        }
        None => eprintln!("{m}"),
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let diag = serde_json::json!({"error": error_name(&e), "message": e.to_string()});
            eprintln!("{diag}");
            ExitCode::from(if e.is_resource_cap() { 3 } else { 2 })
        }
    }
}
