mod args;
mod commands;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format, FLAG_KEYS};
use commands::{Failure, Outcome};

/// Reads `key = value` lines; `#` starts a comment.
fn read_config(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if k == "config" {
            return Err(format!("config line {}: nested config files are not supported", i + 1));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        a.strip_prefix("--config=").map(str::to_string).or_else(|| (a == "--config").then(|| argv.get(i + 1).cloned()).flatten())
    })
}

/// Inserts config entries right after the subcommand words, skipping keys
/// the command line already sets.
fn splice_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let entries = read_config(Path::new(&path))?;
    let given = |k: &str| argv.iter().any(|a| a == &format!("--{k}") || a.starts_with(&format!("--{k}=")));
    let mut extra = Vec::new();
    for (k, v) in entries {
        if given(&k) {
            continue;
        }
        if FLAG_KEYS.contains(&k.as_str()) {
            match v.as_str() {
                "true" => extra.push(format!("--{k}")),
                "false" => {}
                _ => return Err(format!("config key {k} takes true or false")),
            }
        } else {
            extra.push(format!("--{k}={v}"));
        }
    }
    let Some(pos) = argv.iter().position(|a| ["verify", "gl2", "betaseq"].contains(&a.as_str())) else {
        return Ok(argv);
    };
    let at = if argv[pos] == "betaseq" { pos + 1 } else { (pos + 2).min(argv.len()) };
    let mut out = argv;
    out.splice(at..at, extra);
    Ok(out)
}

fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        Format::Table => output::table(doc),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify(v) => commands::verify(v),
        Command::Gl2(g) => commands::gl2_cmd(g),
        Command::Betaseq(b) => commands::betaseq(b),
    }
}

fn main() -> ExitCode {
    let argv = match splice_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Math(m)) => {
            eprintln!("failed: {m}");
            return ExitCode::from(1);
        }
    };
    let mut doc = json!({
        "command": outcome.command,
        "job": outcome.job,
        "pass": outcome.pass,
        "result": outcome.result,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut fixture_ok = true;
    if let Some(dir) = &cli.fixture_dir {
        // the fixture never contains the timing
        let text = render(&doc, Format::Json);
        let file = dir.join(output::fixture_name(&outcome.command, &outcome.job));
        match fs::read_to_string(&file) {
            Ok(old) if old == text => {}
            Ok(_) => {
                eprintln!("fixture mismatch: {}", file.display());
                fixture_ok = false;
            }
            Err(_) => {
                if let Err(e) = fs::create_dir_all(dir).and_then(|_| fs::write(&file, &text)) {
                    eprintln!("error: cannot write fixture {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            }
        }
    }
    if cli.timing {
        doc["elapsed_seconds"] = json!(start.elapsed().as_secs_f64());
    }
    print!("{}", render(&doc, cli.format));
    if outcome.pass && fixture_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
