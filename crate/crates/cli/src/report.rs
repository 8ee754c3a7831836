//! Deterministic command reports.
//!
//! Fields print in insertion order in both renderings, so two runs on the
//! same input are byte identical.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Machine,
}

#[derive(Debug, Clone)]
pub struct Report {
    command: String,
    fields: Vec<(String, String)>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            fields: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Machine => {
                out.push_str(&format!("command = {}\n", self.command));
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k} = {v}\n"));
                }
                for w in &self.warnings {
                    out.push_str(&format!("warning = {w}\n"));
                }
            }
            OutputFormat::Human => {
                out.push_str(&format!("[{}]\n", self.command));
                for (k, v) in &self.fields {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
                for w in &self.warnings {
                    out.push_str(&format!("  warning: {w}\n"));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_rendering_is_ordered() {
        let mut r = Report::new("demo");
        r.push("b", 2);
        r.push("a", 1);
        r.warn("w");
        assert_eq!(
            r.render(OutputFormat::Machine),
            "command = demo\nb = 2\na = 1\nwarning = w\n"
        );
    }
}
