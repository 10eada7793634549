//! The `phoenix` command-line driver.
//!
//! Exit codes are the same for every command: 0 success, 1 compile error,
//! 2 runtime error, 64 usage error, 66 I/O error.

use std::ffi::OsString;
use std::io::{BufRead, Cursor, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::codegen::image::MAGIC;
use crate::codegen::{disassemble, ProgramImage};
use crate::diagnostic::{sort_diagnostics, Diagnostic};
use crate::lexer::{dump_tokens, tokenize};
use crate::parser::dump_ast;
use crate::pipeline::{check_source, compile_source, parse_source, CompileOptions};
use crate::preprocess::preprocess;
use crate::source::SourceFile;
use crate::vm::{run, Console, Dialog, RunOptions, RuntimeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPILE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 66;

/// Overrides the default step limit when `--max-steps` is absent.
pub const MAX_STEPS_ENV: &str = "PHOENIX_MAX_STEPS";

#[derive(Debug, Parser)]
#[command(
    name = "phoenix",
    version,
    about = "Compiler and virtual machine for the Phoenix language"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a source file into a `.phxc` program image.
    Build {
        input: PathBuf,
        /// Output path; defaults to the input with a `.phxc` extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep variables that are never read.
        #[arg(long)]
        keep_unused: bool,
    },
    /// Run a source file or a program image.
    Run {
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the token stream.
    Lex { input: PathBuf },
    /// Print the syntax tree.
    Parse { input: PathBuf },
    /// Report semantic diagnostics.
    Check { input: PathBuf },
    /// Print the bytecode listing of a source file or program image.
    Disasm { input: PathBuf },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Read input lines from FILE instead of stdin.
    #[arg(long, value_name = "FILE")]
    pub input_script: Option<PathBuf>,
    /// Instruction budget before the run is stopped with R-006.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Print every executed instruction to stderr.
    #[arg(long)]
    pub trace: bool,
}

/// The process streams, borrowed so the driver can run in tests.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, env_max_steps: Option<String>, io: Streams<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                io.stderr.write_all(text.as_bytes())
            } else {
                io.stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    Driver { io, env_max_steps }.execute(cli.command)
}

/// Runs with the real process streams and environment.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut stdin = stdin.lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let code = main_with(
        std::env::args_os(),
        std::env::var(MAX_STEPS_ENV).ok(),
        Streams {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    );
    let _ = stdout.flush();
    code
}

/// A failure that ends the command with an exit code; the message is already printed.
struct Exit(i32);

type CmdResult = Result<(), Exit>;

struct Driver<'a> {
    io: Streams<'a>,
    env_max_steps: Option<String>,
}

/// What a path on the command line turned out to hold.
enum Input {
    Source(SourceFile),
    Image(Vec<u8>),
}

impl Driver<'_> {
    fn execute(&mut self, command: Command) -> i32 {
        let result = match command {
            Command::Build {
                input,
                output,
                keep_unused,
            } => self.build(&input, output, keep_unused),
            Command::Run { input, run } => self.run(&input, &run),
            Command::Lex { input } => self.lex(&input),
            Command::Parse { input } => self.parse(&input),
            Command::Check { input } => self.check(&input),
            Command::Disasm { input } => self.disasm(&input),
        };
        let _ = self.io.stdout.flush();
        match result {
            Ok(()) => EXIT_OK,
            Err(Exit(code)) => code,
        }
    }

    fn err_line(&mut self, text: &str) {
        let _ = writeln!(self.io.stderr, "{text}");
    }

    fn out(&mut self, text: &str) -> CmdResult {
        match self.io.stdout.write_all(text.as_bytes()) {
            Ok(()) => Ok(()),
            Err(e) => {
                self.err_line(&format!("phoenix: cannot write output: {e}"));
                Err(Exit(EXIT_IO))
            }
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Exit> {
        std::fs::read(path).map_err(|e| {
            self.err_line(&format!("phoenix: cannot read {}: {e}", path.display()));
            Exit(EXIT_IO)
        })
    }

    fn load(&mut self, path: &Path) -> Result<Input, Exit> {
        let bytes = self.read(path)?;
        let is_image = bytes.starts_with(MAGIC) || path.extension().is_some_and(|e| e == "phxc");
        if is_image {
            return Ok(Input::Image(bytes));
        }
        match SourceFile::from_bytes(path.display().to_string(), &bytes) {
            Ok(src) => Ok(Input::Source(src)),
            Err(e) => {
                self.err_line(&format!(
                    "phoenix: {} is not valid UTF-8: {e}",
                    path.display()
                ));
                Err(Exit(EXIT_IO))
            }
        }
    }

    fn source(&mut self, path: &Path) -> Result<SourceFile, Exit> {
        match self.load(path)? {
            Input::Source(src) => Ok(src),
            Input::Image(_) => {
                self.err_line(&format!(
                    "phoenix: {} is a program image, not source",
                    path.display()
                ));
                Err(Exit(EXIT_USAGE))
            }
        }
    }

    /// Prints diagnostics to stderr, sorted by position.
    fn report(&mut self, mut diags: Vec<Diagnostic>, src: Option<&SourceFile>) {
        sort_diagnostics(&mut diags);
        for d in &diags {
            let text = match src {
                Some(src) => d.render(src),
                None => d.to_string(),
            };
            self.err_line(&text);
        }
    }

    fn compile(&mut self, src: &SourceFile, options: CompileOptions) -> Result<ProgramImage, Exit> {
        match compile_source(src, options) {
            Ok(compiled) => {
                self.report(compiled.warnings, Some(src));
                Ok(compiled.image)
            }
            Err(diags) => {
                self.report(diags, Some(src));
                Err(Exit(EXIT_COMPILE))
            }
        }
    }

    fn image(&mut self, path: &Path) -> Result<ProgramImage, Exit> {
        match self.load(path)? {
            Input::Source(src) => self.compile(&src, CompileOptions::default()),
            Input::Image(bytes) => ProgramImage::from_bytes(&bytes).map_err(|d| {
                self.report(vec![d], None);
                Exit(EXIT_COMPILE)
            }),
        }
    }

    fn build(&mut self, input: &Path, output: Option<PathBuf>, keep_unused: bool) -> CmdResult {
        let src = self.source(input)?;
        let image = self.compile(
            &src,
            CompileOptions {
                eliminate_unused: !keep_unused,
            },
        )?;
        let output = output.unwrap_or_else(|| input.with_extension("phxc"));
        std::fs::write(&output, image.to_bytes()).map_err(|e| {
            self.err_line(&format!("phoenix: cannot write {}: {e}", output.display()));
            Exit(EXIT_IO)
        })
    }

    fn max_steps(&mut self, flag: Option<u64>) -> Result<u64, Exit> {
        if let Some(n) = flag {
            return Ok(n);
        }
        match self.env_max_steps.clone() {
            None => Ok(RunOptions::default().max_steps),
            Some(v) => v.trim().parse().map_err(|_| {
                self.err_line(&format!(
                    "phoenix: {MAX_STEPS_ENV} must be a non-negative integer, got {v:?}"
                ));
                Exit(EXIT_USAGE)
            }),
        }
    }

    fn run(&mut self, input: &Path, args: &RunArgs) -> CmdResult {
        let max_steps = self.max_steps(args.max_steps)?;
        let image = self.image(input)?;
        let script = match &args.input_script {
            Some(path) => Some(self.read(path)?),
            None => None,
        };
        let options = RunOptions {
            max_steps,
            trace: args.trace,
            ..RunOptions::default()
        };
        let result = {
            let Streams {
                stdin,
                stdout,
                stderr,
            } = &mut self.io;
            let mut script_reader;
            let reader: &mut dyn BufRead = match script {
                Some(bytes) => {
                    script_reader = Cursor::new(bytes);
                    &mut script_reader
                }
                None => &mut **stdin,
            };
            let mut dialog = CliDialog {
                console: Console::new(reader, &mut **stdout),
                trace: &mut **stderr,
            };
            run(&image, &mut dialog, options)
        };
        let _ = self.io.stdout.flush();
        result.map_err(|e: RuntimeError| {
            self.err_line(&e.to_string());
            Exit(EXIT_RUNTIME)
        })
    }

    fn lex(&mut self, input: &Path) -> CmdResult {
        let src = self.source(input)?;
        match tokenize(&preprocess(&src)) {
            Ok(tokens) => self.out(&dump_tokens(&tokens)),
            Err(d) => {
                self.report(vec![d], Some(&src));
                Err(Exit(EXIT_COMPILE))
            }
        }
    }

    fn parse(&mut self, input: &Path) -> CmdResult {
        let src = self.source(input)?;
        match parse_source(&src) {
            Ok(program) => self.out(&dump_ast(&program)),
            Err(d) => {
                self.report(vec![d], Some(&src));
                Err(Exit(EXIT_COMPILE))
            }
        }
    }

    /// Diagnostics go to stdout here, since they are the command's output.
    fn check(&mut self, input: &Path) -> CmdResult {
        let src = self.source(input)?;
        let (mut diags, code) = match check_source(&src, CompileOptions::default()) {
            Ok(analysis) => (analysis.warnings, EXIT_OK),
            Err(diags) => (diags, EXIT_COMPILE),
        };
        sort_diagnostics(&mut diags);
        let mut text = String::new();
        for d in &diags {
            text.push_str(&d.render(&src));
            text.push('\n');
        }
        self.out(&text)?;
        if code == EXIT_OK {
            Ok(())
        } else {
            Err(Exit(code))
        }
    }

    fn disasm(&mut self, input: &Path) -> CmdResult {
        let image = self.image(input)?;
        self.out(&disassemble(&image))
    }
}

/// Console I/O with trace lines sent to a separate sink.
struct CliDialog<'a, R, W> {
    console: Console<R, W>,
    trace: &'a mut dyn Write,
}

impl<R: BufRead, W: Write> Dialog for CliDialog<'_, R, W> {
    fn show(&mut self, text: &str) -> Result<(), RuntimeError> {
        self.console.show(text)
    }

    fn input(&mut self, prompt: &str) -> Result<Option<String>, RuntimeError> {
        self.console.input(prompt)
    }

    fn trace(&mut self, line: &str) {
        let _ = writeln!(self.trace, "{line}");
    }
}
