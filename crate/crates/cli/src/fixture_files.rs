//! The built-in reference pictures as files.

use std::path::{Path, PathBuf};

use tanglescope::{fixtures, WeightedCanvas};

use crate::error::{io_error, CliError, Result};
use crate::input::gray_decode;

pub const NAMES: [&str; 5] = ["mono2x2", "miniL", "quad4x4", "checker4x4", "noisedisc4x4"];

/// The fixture called `name` with a one-line description.
pub fn fixture(name: &str) -> Result<(WeightedCanvas, String)> {
    let (wc, about) = match name {
        "mono2x2" => (fixtures::mono2x2(), "2x2, top-left pixel black".to_string()),
        "miniL" => (fixtures::mini_l(), "5x5 letter L of 7 black pixels".to_string()),
        "quad4x4" => (
            fixtures::quad4x4(),
            "4x4 quadrants with two-bit codes TL=00 TR=11 BL=01 BR=10".to_string(),
        ),
        "checker4x4" => (fixtures::checker4x4(), "4x4 checkerboard".to_string()),
        "noisedisc4x4" => (
            fixtures::noise_disc4x4(),
            format!(
                "4x4 black 2x2 block in noise; ring pixels take the top bit of \
                 x <- 1664525 x + 1013904223 mod 2^32, seed {}",
                fixtures::NOISE_SEED
            ),
        ),
        _ => return Err(CliError::UnknownFixture(name.to_string())),
    };
    Ok((wc, about))
}

/// Grid text of a picture.
pub fn grid_text(wc: &WeightedCanvas, about: &str) -> String {
    let pic = wc.picture();
    let w = pic.canvas().width();
    let mut out = format!("# {about}\n{} {} {}\n", w, pic.canvas().height(), pic.n());
    for row in pic.values().chunks(w) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:x}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Plain gray map whose levels quantize back to the picture's codes.
pub fn pgm_text(wc: &WeightedCanvas, about: &str) -> String {
    let pic = wc.picture();
    let w = pic.canvas().width();
    let maxval = (1u64 << pic.n()) - 1;
    let mut out = format!("P2\n# {about}\n{} {}\n{maxval}\n", w, pic.canvas().height());
    for row in pic.values().chunks(w) {
        let cells: Vec<String> = row.iter().map(|&v| gray_decode(v).to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Write `<name>.grid` and `<name>.pgm` into `dir`.
pub fn write_fixture(name: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    let (wc, about) = fixture(name)?;
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut written = Vec::new();
    for (ext, text) in [("grid", grid_text(&wc, &about)), ("pgm", pgm_text(&wc, &about))] {
        let path = dir.join(format!("{name}.{ext}"));
        std::fs::write(&path, text).map_err(|e| io_error(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
