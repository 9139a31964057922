use orbsurf_core::Assumption;
use serde::Serialize;

/// Envelope of every JSON result: what ran, on what input, under which
/// assumptions, and what came out.
#[derive(Debug, Serialize)]
pub struct RunManifest<I: Serialize, O: Serialize> {
    pub subcommand: &'static str,
    pub input: I,
    pub version: &'static str,
    pub assumptions: Vec<Assumption>,
    pub outputs: O,
}

impl<I: Serialize, O: Serialize> RunManifest<I, O> {
    pub fn new(
        subcommand: &'static str,
        input: I,
        assumptions: Vec<Assumption>,
        outputs: O,
    ) -> Self {
        RunManifest {
            subcommand,
            input,
            version: env!("CARGO_PKG_VERSION"),
            assumptions,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifests serialize");
        s.push('\n');
        s
    }
}
