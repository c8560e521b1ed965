//! Output envelope shared by every command.

use serde::Serialize;

use crate::config::RunConfig;

pub const TOOL: &str = "deltamix";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Something a command prints.
pub trait Body: Serialize {
    /// Line-oriented rendering; every line ends in `\n`.
    fn text(&self) -> String;
}

#[derive(Serialize)]
struct Envelope<'a, B: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(serialize_with = "as_map")]
    inputs: &'a [(String, String)],
    result: &'a B,
}

fn as_map<S: serde::Serializer>(inputs: &&[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(inputs.iter().map(|(k, v)| (k, v)))
}

/// Render `body` with the tool version, the command, its inputs and the config.
pub fn render<B: Body>(format: Format, command: &str, config: &RunConfig, inputs: &[(String, String)], body: &B) -> String {
    match format {
        Format::Text => {
            let mut out = format!("{TOOL} {VERSION} {command}\nconfig {}\n", config.to_line());
            for (k, v) in inputs {
                out.push_str(&format!("input {k}={v}\n"));
            }
            out.push_str("---\n");
            out.push_str(&body.text());
            out
        }
        Format::Json => {
            let env = Envelope {
                tool: TOOL,
                version: VERSION,
                command,
                config,
                inputs,
                result: body,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("artifact serializes");
            s.push('\n');
            s
        }
    }
}
