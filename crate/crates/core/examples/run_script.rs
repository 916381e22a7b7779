//! Replays the bundled A5 script and prints the report and audit log.
//!
//! ```text
//! cargo run --example run_script
//! ```

use std::path::Path;

use chartab::pipeline::{run_script, RunOptions};

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let r = run_script(&root.join("scripts/a5_demo.chs"), &root.join("data"), &RunOptions::default());
    print!("{r}");
    if let Some(e) = &r.error {
        println!("error: {e}");
    }
    println!("audit log:");
    for line in &r.audit {
        println!("  {line}");
    }
    let (pass, fail) = r.checkpoints();
    println!("{pass} passed, {fail} failed, overall {}", if r.passed() { "ok" } else { "failed" });
}
