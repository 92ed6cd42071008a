use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub clique_number: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    /// Parsed flags, including defaults that were not spelled out.
    pub flags: Vec<(String, String)>,
}

/// Outcome of one command. Printed as `key=value` lines; `--report` appends
/// the same record as one JSON line.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub graph: Option<GraphStats>,
    pub verdict: String,
    pub certificate: Option<PathBuf>,
    pub stats: Vec<(String, String)>,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn new(command: Vec<String>, verdict: impl Into<String>) -> RunReport {
        RunReport {
            command,
            graph: None,
            verdict: verdict.into(),
            certificate: None,
            stats: Vec::new(),
            provenance: Provenance {
                tool: "folkman",
                version: env!("CARGO_PKG_VERSION"),
                flags: Vec::new(),
            },
        }
    }

    pub fn stat(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.stats.push((key.to_string(), value.to_string()));
        self
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.provenance
            .flags
            .push((key.to_string(), value.to_string()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("command={}", shell_join(&self.command))];
        lines.push(format!(
            "tool={} {}",
            self.provenance.tool, self.provenance.version
        ));
        for (k, v) in &self.provenance.flags {
            lines.push(format!("flag.{k}={v}"));
        }
        if let Some(g) = &self.graph {
            lines.push(format!("n={}", g.n));
            lines.push(format!("m={}", g.m));
            if let Some(cl) = g.clique_number {
                lines.push(format!("cl={cl}"));
            }
        }
        lines.push(format!("verdict={}", self.verdict));
        if let Some(p) = &self.certificate {
            lines.push(format!("certificate={}", p.display()));
        }
        for (k, v) in &self.stats {
            lines.push(format!("{k}={v}"));
        }
        lines.join("\n") + "\n"
    }

    pub fn append_json(&self, path: &Path) -> anyhow::Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening report file {}", path.display()))?;
        let line = serde_json::to_string(self)?;
        writeln!(f, "{line}").with_context(|| format!("writing report file {}", path.display()))
    }
}

fn shell_join(args: &[String]) -> String {
    args.iter()
        .map(|a| {
            if !a.is_empty()
                && a.chars()
                    .all(|c| c.is_ascii_alphanumeric() || "-_.,/=:+*".contains(c))
            {
                a.clone()
            } else {
                format!("'{}'", a.replace('\'', r"'\''"))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let mut r = RunReport::new(
            vec!["folkman".into(), "graph".into(), "K3 + C5".into()],
            "OK",
        );
        r.graph = Some(GraphStats {
            n: 8,
            m: 23,
            clique_number: Some(5),
        });
        r.stat("elapsed_ms", 3);
        let text = r.to_text();
        assert!(text.starts_with("command=folkman graph 'K3 + C5'\ntool=folkman "));
        assert!(text.contains("\nn=8\nm=23\ncl=5\nverdict=OK\nelapsed_ms=3\n"));
    }

    #[test]
    fn json_lines_append() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let r = RunReport::new(vec!["folkman".into()], "PASS");
        r.append_json(&path).unwrap();
        r.append_json(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(v["verdict"], "PASS");
    }
}
