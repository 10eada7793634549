//! Runtime: the value model, the stack machine that executes program images,
//! and a reference evaluator over the typed program.

pub mod dialog;
pub mod machine;
pub mod oracle;
pub mod value;

pub use dialog::{Console, Dialog, Event, ScriptedDialog, Transcript};
pub use machine::{run, Machine, RunOptions, DEFAULT_MAX_FRAMES, DEFAULT_MAX_STEPS};
pub use oracle::tree_walk_eval;
pub use value::{
    exec_arithmetic, exec_concat, exec_input, num_to_str, parse_number, RuntimeError, Value,
};
