use std::io::Write;

use super::LinkBatch;
use crate::model::Mode;

/// Writes one comma-separated record per snapshot:
/// `trial,seed,tier,distance_m,sinr` (SINR linear, `inf` when interference-
/// and noise-free).
pub fn write_dump<W: Write>(batch: &LinkBatch, mode: Mode, mut out: W) -> std::io::Result<()> {
    writeln!(out, "trial,seed,tier,distance_m,sinr")?;
    for s in &batch.samples {
        writeln!(
            out,
            "{},{},{},{:.8e},{:.8e}",
            s.trial,
            batch.seed,
            s.tier.symbol(),
            s.horizontal,
            s.sinr(mode, batch.noise_power)
        )?;
    }
    out.flush()
}
