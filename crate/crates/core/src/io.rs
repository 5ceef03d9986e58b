//! Output formatting shared by the library writers and the CLI.

use std::io::Write;

use crate::error::Result;

/// A real with 17 significant digits (round-trips exactly).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// The comment line that heads every CSV file.
pub fn csv_comment<W: Write>(w: &mut W, seed: Option<u64>, cmd: &str) -> Result<()> {
    let seed = seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into());
    writeln!(w, "# latdir v{}, seed={}, cmd={}", env!("CARGO_PKG_VERSION"), seed, cmd)?;
    Ok(())
}
