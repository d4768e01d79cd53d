//! Output in two modes: `key value` lines for machines, labelled lines for people.

use std::fmt::Display;

pub struct Report {
    machine: bool,
    lines: Vec<String>,
}

impl Report {
    pub fn new(machine: bool) -> Self {
        Report {
            machine,
            lines: Vec::new(),
        }
    }

    /// A scalar value: `key value` or `Label: value`.
    pub fn field(&mut self, key: &str, label: &str, value: impl Display) {
        let line = if self.machine {
            format!("{key} {value}")
        } else {
            format!("{label}: {value}")
        };
        self.lines.push(line);
    }

    /// A repeated entry: `key value` or an indented `value`.
    pub fn item(&mut self, key: &str, value: impl Display) {
        let line = if self.machine {
            format!("{key} {value}")
        } else {
            format!("  {value}")
        };
        self.lines.push(line);
    }

    /// A heading shown only in text mode.
    pub fn heading(&mut self, text: &str) {
        if !self.machine {
            self.lines.push(format!("{text}:"));
        }
    }

    pub fn print(&self) {
        for l in &self.lines {
            println!("{l}");
        }
    }
}
