use std::io::{self, BufReader};
use std::net::TcpListener;
use std::path::Path;
use std::sync::Arc;

use prologi_core::protocol::{serve, serve_tcp};

use crate::{load_program, Config, EXIT_YES};

enum Endpoint {
    Stdio,
    Tcp(u16),
}

fn parse_endpoint(spec: &str) -> Result<Endpoint, String> {
    if spec == "stdio" {
        return Ok(Endpoint::Stdio);
    }
    let port = spec
        .strip_prefix("tcp:")
        .ok_or_else(|| format!("unknown protocol `{spec}` (expected stdio or tcp:PORT)"))?;
    port.parse()
        .map(Endpoint::Tcp)
        .map_err(|_| format!("invalid port `{port}`"))
}

pub fn run(program_path: Option<&Path>, config: &Config) -> Result<u8, String> {
    let endpoint = parse_endpoint(&config.protocol)?;
    let program = program_path.map(load_program).transpose()?.map(Arc::new);
    if config.goal.is_some() {
        eprintln!("warning: --goal is ignored by serve");
    }
    let opts = config.solve_options();
    match endpoint {
        Endpoint::Stdio => {
            let stdin = io::stdin();
            serve(BufReader::new(stdin.lock()), io::stdout(), program, opts)
                .map_err(|e| e.to_string())?;
        }
        Endpoint::Tcp(port) => {
            let listener =
                TcpListener::bind(("127.0.0.1", port)).map_err(|e| format!("port {port}: {e}"))?;
            let addr = listener.local_addr().map_err(|e| e.to_string())?;
            eprintln!("listening on {addr}");
            serve_tcp(listener, program, opts).map_err(|e| e.to_string())?;
        }
    }
    Ok(EXIT_YES)
}
