//! The output and input dialogs, mapped onto line streams.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use super::value::{RuntimeError, IO_FAILURE};

/// Where `أعرض` lines go and where `أدخل` lines come from.
pub trait Dialog {
    /// Writes one output line.
    fn show(&mut self, text: &str) -> Result<(), RuntimeError>;
    /// Writes the prompt, then reads one line; `None` at end of input.
    fn input(&mut self, prompt: &str) -> Result<Option<String>, RuntimeError>;
    /// Receives one line per executed instruction when tracing.
    fn trace(&mut self, _line: &str) {}
}

/// One observable event of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Show(String),
    Prompt(String),
}

/// Everything a program showed and asked, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub events: Vec<Event>,
}

impl Transcript {
    /// Output lines only, without prompts.
    pub fn shown(&self) -> Vec<&str> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Show(s) => Some(s.as_str()),
                Event::Prompt(_) => None,
            })
            .collect()
    }

    /// The console rendering: output lines, and prompts prefixed with `? `.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            match e {
                Event::Show(s) => out.push_str(s),
                Event::Prompt(p) => {
                    out.push_str("? ");
                    out.push_str(p);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Feeds a fixed list of input lines and records a transcript.
#[derive(Debug, Clone, Default)]
pub struct ScriptedDialog {
    pub inputs: VecDeque<String>,
    pub transcript: Transcript,
}

impl ScriptedDialog {
    pub fn new<S: Into<String>>(inputs: impl IntoIterator<Item = S>) -> Self {
        ScriptedDialog {
            inputs: inputs.into_iter().map(Into::into).collect(),
            transcript: Transcript::default(),
        }
    }
}

impl Dialog for ScriptedDialog {
    fn show(&mut self, text: &str) -> Result<(), RuntimeError> {
        self.transcript.events.push(Event::Show(text.to_string()));
        Ok(())
    }

    fn input(&mut self, prompt: &str) -> Result<Option<String>, RuntimeError> {
        self.transcript
            .events
            .push(Event::Prompt(prompt.to_string()));
        Ok(self.inputs.pop_front())
    }
}

/// Line-oriented console over any reader and writer. Trace lines go to `trace`.
pub struct Console<R, W> {
    pub input: R,
    pub output: W,
    pub trace: Option<Box<dyn Write>>,
}

impl<R: BufRead, W: Write> Console<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Console {
            input,
            output,
            trace: None,
        }
    }
}

fn io_error(e: std::io::Error) -> RuntimeError {
    RuntimeError::new(IO_FAILURE, format!("console failure: {e}"))
}

impl<R: BufRead, W: Write> Dialog for Console<R, W> {
    fn show(&mut self, text: &str) -> Result<(), RuntimeError> {
        writeln!(self.output, "{text}").map_err(io_error)
    }

    fn input(&mut self, prompt: &str) -> Result<Option<String>, RuntimeError> {
        writeln!(self.output, "? {prompt}").map_err(io_error)?;
        self.output.flush().map_err(io_error)?;
        let mut line = String::new();
        if self.input.read_line(&mut line).map_err(io_error)? == 0 {
            return Ok(None);
        }
        let trimmed = line.strip_suffix('\n').unwrap_or(&line);
        Ok(Some(
            trimmed.strip_suffix('\r').unwrap_or(trimmed).to_string(),
        ))
    }

    fn trace(&mut self, line: &str) {
        if let Some(t) = &mut self.trace {
            let _ = writeln!(t, "{line}");
        }
    }
}
