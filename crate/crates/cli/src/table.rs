//! CSV output with a `#`-prefixed provenance header.

use optospring::Density;

/// Rendered command output.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
}

pub(crate) struct Table {
    header: Vec<String>,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Self {
            header: vec![format!(
                "optospring {} {command}",
                env!("CARGO_PKG_VERSION")
            )],
            writer: csv::Writer::from_writer(Vec::new()),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.header.push(line.into());
    }

    pub fn block(&mut self, title: &str, text: &str) {
        self.comment(format!("{title}:"));
        for line in text.lines().filter(|l| !l.is_empty()) {
            self.comment(format!("  {line}"));
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self, warnings: Vec<String>) -> Report {
        let mut text = String::new();
        for line in &self.header {
            text.push_str("# ");
            text.push_str(line);
            text.push('\n');
        }
        for w in &warnings {
            text.push_str("# warning: ");
            text.push_str(w);
            text.push('\n');
        }
        let body = self.writer.into_inner().expect("in-memory flush");
        text.push_str(std::str::from_utf8(&body).expect("ascii output"));
        Report { text, warnings }
    }
}

/// Shortest round-trip scientific notation; `nan` and `inf` spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:e}")
    }
}

pub fn density(d: Density) -> String {
    num(d.value())
}
