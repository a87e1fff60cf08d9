//! Bit-specified artifact emitters: CSV grids, binary PGM/PPM images.
//!
//! All number formatting is frozen so outputs golden-test byte-for-byte:
//! probabilities and statistics print with exactly six decimals, rounded
//! half-up; grayscale pixels are `round_half_up(255 * p)`.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Fixed 12-entry opinion palette; opinion `k` maps to entry `k % 12`.
/// The first two entries are the red/green pair used for two-opinion maps.
pub const OPINION_PALETTE: [[u8; 3]; 12] = [
    [220, 50, 47],   // red
    [133, 153, 0],   // green
    [38, 139, 210],  // blue
    [181, 137, 0],   // yellow
    [211, 54, 130],  // magenta
    [42, 161, 152],  // cyan
    [203, 75, 22],   // orange
    [108, 113, 196], // violet
    [88, 110, 117],  // dark gray
    [147, 161, 161], // light gray
    [0, 43, 54],     // near black
    [238, 232, 213], // near white
];

/// Six decimals, round-half-up, for nonnegative finite values.
pub fn format_fixed6(x: f64) -> String {
    debug_assert!(x.is_finite() && x >= 0.0);
    let micros = (x * 1e6 + 0.5).floor() as u64;
    format!("{}.{:06}", micros / 1_000_000, micros % 1_000_000)
}

/// Grayscale byte for a probability: `round_half_up(255 * p)`.
pub fn gray_byte(p: f64) -> u8 {
    let v = (255.0 * p + 0.5).floor();
    v.clamp(0.0, 255.0) as u8
}

/// CSV body: one lattice row per line, comma-separated opinion indices,
/// LF endings, no trailing comma.
pub fn opinions_csv_bytes(opinions: &[u32], side: usize) -> Vec<u8> {
    let mut out = String::new();
    for row in opinions.chunks(side) {
        for (i, op) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&op.to_string());
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// Binary P6 pixmap, one palette pixel per agent.
pub fn opinions_ppm_bytes(opinions: &[u32], side: usize) -> Vec<u8> {
    let mut out = format!("P6\n{side} {side}\n255\n").into_bytes();
    for &op in opinions {
        out.extend_from_slice(&OPINION_PALETTE[op as usize % OPINION_PALETTE.len()]);
    }
    out
}

/// CSV body of sustain probabilities at six decimals.
pub fn sustain_csv_bytes(values: &[f64], side: usize) -> Vec<u8> {
    let mut out = String::new();
    for row in values.chunks(side) {
        for (i, &p) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_fixed6(p));
        }
        out.push('\n');
    }
    out.into_bytes()
}

/// Binary P5 graymap of sustain probabilities.
pub fn sustain_pgm_bytes(values: &[f64], side: usize) -> Vec<u8> {
    let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
    out.extend(values.iter().map(|&p| gray_byte(p)));
    out
}

/// Write through a temp file and rename, so failed writes leave no partial
/// artifact behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let attempt = (|| -> std::io::Result<()> {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    })();
    if let Err(e) = attempt {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError::Runtime(format!(
            "writing {}: {e}",
            path.display()
        )));
    }
    Ok(())
}
