//! Picture files: netpbm gray maps and a plain grid text format.
//!
//! The grid format is a header line `w h n` followed by one hex code per
//! pixel in row-major order; `#` starts a comment.

use std::path::Path;

use tanglescope::{Canvas, Picture};

use crate::error::{io_error, CliError, Result};

/// Largest picture accepted on input.
pub const MAX_PIXELS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Pgm,
    Grid,
}

impl Format {
    /// Guess from the leading magic number.
    pub fn detect(bytes: &[u8]) -> Format {
        if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
            Format::Pgm
        } else {
            Format::Grid
        }
    }
}

/// Read a picture; `bits` is the code width for gray maps and is ignored
/// for grid files, which carry their own.
pub fn load_picture(path: &Path, format: Option<Format>, bits: usize) -> Result<Picture> {
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    match format.unwrap_or_else(|| Format::detect(&bytes)) {
        Format::Pgm => parse_pgm(&bytes, bits),
        Format::Grid => {
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::Header("grid file is not UTF-8".into()))?;
            parse_grid(&text)
        }
    }
}

fn strip_comments(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
}

fn header_number(tok: Option<&str>, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| CliError::Header(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| CliError::Header(format!("{what} {tok:?} is not a number")))
}

fn canvas(width: usize, height: usize) -> Result<Canvas> {
    let pixels = width * height;
    if pixels > MAX_PIXELS {
        return Err(CliError::Dimensions {
            pixels,
            cap: MAX_PIXELS,
        });
    }
    Ok(Canvas::grid_with_cap(width, height, MAX_PIXELS)?)
}

pub fn parse_grid(text: &str) -> Result<Picture> {
    let mut tokens = strip_comments(text);
    let width = header_number(tokens.next(), "width")?;
    let height = header_number(tokens.next(), "height")?;
    let n = header_number(tokens.next(), "parameter count")?;
    let canvas = canvas(width, height)?;
    let values = tokens
        .map(|t| u64::from_str_radix(t, 16).map_err(|_| CliError::Token(t.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != width * height {
        return Err(CliError::TokenCount {
            expected: width * height,
            actual: values.len(),
        });
    }
    Ok(Picture::new(canvas, n, values)?)
}

/// Gray code of `level`: adjacent levels differ in one bit.
pub fn gray_code(level: u64) -> u64 {
    level ^ (level >> 1)
}

/// The level whose Gray code is `code`.
pub fn gray_decode(code: u64) -> u64 {
    let mut level = code;
    let mut shift = 1;
    while shift < 64 {
        level ^= level >> shift;
        shift <<= 1;
    }
    level
}

/// Quantize gray value `g ≤ maxval` into `2^bits` uniform levels.
pub fn quantize(g: u64, maxval: u64, bits: usize) -> u64 {
    gray_code(g * (1u64 << bits) / (maxval + 1))
}

/// Parse a P2 or P5 gray map; values become `bits`-bit Gray codes.
pub fn parse_pgm(bytes: &[u8], bits: usize) -> Result<Picture> {
    if !(1..=16).contains(&bits) {
        return Err(CliError::Header(format!("code width {bits} is not in 1..=16")));
    }
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return Err(CliError::Header("not a P2/P5 gray map".into())),
    };
    // Header fields, skipping comments, then the offset of the raster.
    let mut fields = Vec::new();
    let mut i = 2;
    while fields.len() < 3 {
        match bytes.get(i) {
            None => return Err(CliError::Header("truncated header".into())),
            Some(b'#') => {
                while bytes.get(i).is_some_and(|&b| b != b'\n') {
                    i += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => i += 1,
            Some(_) => {
                let start = i;
                while bytes.get(i).is_some_and(|b| !b.is_ascii_whitespace()) {
                    i += 1;
                }
                fields.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
            }
        }
    }
    let width = header_number(Some(&fields[0]), "width")?;
    let height = header_number(Some(&fields[1]), "height")?;
    let maxval = header_number(Some(&fields[2]), "maxval")? as u64;
    if maxval == 0 || maxval > 65_535 {
        return Err(CliError::Header(format!("maxval {maxval} out of range")));
    }
    let canvas = canvas(width, height)?;
    let expected = width * height;
    let grays: Vec<u64> = if binary {
        let raster = &bytes[(i + 1).min(bytes.len())..];
        let wide = maxval > 255;
        let step = if wide { 2 } else { 1 };
        if raster.len() < expected * step {
            return Err(CliError::TokenCount {
                expected,
                actual: raster.len() / step,
            });
        }
        (0..expected)
            .map(|p| {
                if wide {
                    u64::from(raster[2 * p]) << 8 | u64::from(raster[2 * p + 1])
                } else {
                    u64::from(raster[p])
                }
            })
            .collect()
    } else {
        let text = String::from_utf8_lossy(&bytes[i..]);
        let v = strip_comments(&text)
            .map(|t| t.parse().map_err(|_| CliError::Token(t.to_string())))
            .collect::<Result<Vec<u64>>>()?;
        if v.len() != expected {
            return Err(CliError::TokenCount {
                expected,
                actual: v.len(),
            });
        }
        v
    };
    if let Some(&g) = grays.iter().find(|&&g| g > maxval) {
        return Err(CliError::Token(format!("{g} exceeds maxval {maxval}")));
    }
    let values = grays.iter().map(|&g| quantize(g, maxval, bits)).collect();
    Ok(Picture::new(canvas, bits, values)?)
}
