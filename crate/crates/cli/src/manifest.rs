//! Run manifest written at the top of every output file.
//!
//! Wall time is reported on stderr only, so that identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

pub struct Manifest {
    command: &'static str,
    params: Vec<(&'static str, String)>,
    inputs: Vec<(String, String)>,
    counts: Vec<(&'static str, usize)>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Vec::new(),
            inputs: Vec::new(),
            counts: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        self.params.push((key, value.to_string()));
        self
    }

    pub fn count(&mut self, key: &'static str, value: usize) -> &mut Self {
        self.counts.push((key, value));
        self
    }

    /// Read an input file and record its digest.
    pub fn input(&mut self, path: &Path) -> Result<String> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let digest = hex::encode(Sha256::digest(text.as_bytes()));
        self.inputs.push((path.display().to_string(), digest));
        Ok(text)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("torpack {}", env!("CARGO_PKG_VERSION")),
            format!("command: {}", self.command),
        ];
        let mut p = String::from("parameters:");
        for (k, v) in &self.params {
            write!(p, " {k}={v}").unwrap();
        }
        out.push(p);
        for (path, digest) in &self.inputs {
            out.push(format!("input: {path} sha256={digest}"));
        }
        let mut c = String::from("counts:");
        for (k, v) in &self.counts {
            write!(c, " {k}={v}").unwrap();
        }
        out.push(c);
        out
    }

    /// `# `-prefixed comment block followed by a blank line.
    pub fn header(&self) -> String {
        let mut s: String = self.lines().iter().map(|l| format!("# {l}\n")).collect();
        s.push('\n');
        s
    }

    pub fn xml_comment(&self) -> String {
        let mut s = String::from("<!--\n");
        for l in self.lines() {
            writeln!(s, "  {}", l.replace("--", "- -")).unwrap();
        }
        s.push_str("-->\n");
        s
    }
}
