//! Raster export: little-endian bottom-up PFM for float channels and plain
//! PGM for the validity mask.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::ImageSet;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A decoded single-channel PFM, stored top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct Pfm {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

fn format_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

/// Write a greyscale PFM (`Pf`, scale `-1.0` = little-endian), rows bottom-up.
pub fn write_pfm<T: Real>(path: &Path, rows: usize, cols: usize, data: &[T]) -> Result<()> {
    if data.len() != rows * cols {
        return Err(Error::Parameter(format!(
            "PFM data has {} values, raster is {rows}x{cols}",
            data.len()
        )));
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut write = || -> std::io::Result<()> {
        write!(out, "Pf\n{cols} {rows}\n-1.0\n")?;
        for row in (0..rows).rev() {
            for v in &data[row * cols..(row + 1) * cols] {
                out.write_all(&(v.to_f32().unwrap_or(f32::NAN)).to_le_bytes())?;
            }
        }
        out.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

/// Split off `count` whitespace-separated header tokens, returning them and
/// the byte offset just past the single whitespace byte that ends the last one.
fn header_tokens<'a>(bytes: &'a [u8], count: usize, path: &Path) -> Result<(Vec<&'a str>, usize)> {
    let mut tokens = Vec::with_capacity(count);
    let mut i = 0;
    while tokens.len() < count {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if start == i {
            return Err(format_err(path, "truncated header"));
        }
        let tok = std::str::from_utf8(&bytes[start..i])
            .map_err(|_| format_err(path, "header is not ASCII"))?;
        tokens.push(tok);
    }
    Ok((tokens, i + 1))
}

fn parse_dim(tok: &str, path: &Path) -> Result<usize> {
    tok.parse()
        .map_err(|_| format_err(path, format!("bad dimension {tok:?}")))
}

pub fn read_pfm(path: &Path) -> Result<Pfm> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (tok, offset) = header_tokens(&bytes, 4, path)?;
    if tok[0] != "Pf" {
        return Err(format_err(path, format!("expected greyscale PFM, found {:?}", tok[0])));
    }
    let cols = parse_dim(tok[1], path)?;
    let rows = parse_dim(tok[2], path)?;
    let scale: f64 = tok[3]
        .parse()
        .map_err(|_| format_err(path, "bad scale"))?;
    let little = scale < 0.0;
    let body = bytes.get(offset..).unwrap_or_default();
    if body.len() != rows * cols * 4 {
        return Err(format_err(
            path,
            format!("expected {} data bytes, found {}", rows * cols * 4, body.len()),
        ));
    }
    let mut data = vec![0f32; rows * cols];
    for (k, chunk) in body.chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        let (file_row, col) = (k / cols, k % cols);
        data[(rows - 1 - file_row) * cols + col] = v;
    }
    Ok(Pfm { rows, cols, data })
}

/// Plain (ASCII) PGM with 255 for valid pixels and 0 elsewhere.
pub fn write_pgm(path: &Path, rows: usize, cols: usize, mask: &[bool]) -> Result<()> {
    if mask.len() != rows * cols {
        return Err(Error::Parameter("mask size does not match raster".into()));
    }
    let mut s = format!("P2\n{cols} {rows}\n255\n");
    for row in mask.chunks(cols) {
        let line: Vec<&str> = row.iter().map(|&m| if m { "255" } else { "0" }).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Read a plain PGM as a mask (values above half of maxval are valid).
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<bool>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P2") {
        return Err(format_err(path, "expected plain PGM (P2)"));
    }
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| format_err(path, format!("missing {what}")))
            .and_then(|t| parse_dim(t, path))
    };
    let cols = next("width")?;
    let rows = next("height")?;
    let maxval = next("maxval")?;
    let mut mask = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        mask.push(next("pixel")? * 2 > maxval);
    }
    Ok((rows, cols, mask))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

impl<T: Real> ImageSet<T> {
    /// Write `<stem>.aop.pfm`, `<stem>.dop.pfm`, `<stem>.li.pfm` and `<stem>.mask.pgm`.
    pub fn save(&self, stem: &Path) -> Result<Vec<PathBuf>> {
        let files = Self::file_names(stem);
        write_pfm(&files[0], self.rows, self.cols, &self.aop)?;
        write_pfm(&files[1], self.rows, self.cols, &self.dop)?;
        write_pfm(&files[2], self.rows, self.cols, &self.li)?;
        write_pgm(&files[3], self.rows, self.cols, &self.mask)?;
        Ok(files.to_vec())
    }

    pub fn file_names(stem: &Path) -> [PathBuf; 4] {
        [
            with_suffix(stem, ".aop.pfm"),
            with_suffix(stem, ".dop.pfm"),
            with_suffix(stem, ".li.pfm"),
            with_suffix(stem, ".mask.pgm"),
        ]
    }

    pub fn load(stem: &Path) -> Result<Self> {
        let files = Self::file_names(stem);
        let aop = read_pfm(&files[0])?;
        let dop = read_pfm(&files[1])?;
        let li = read_pfm(&files[2])?;
        let (rows, cols, mask) = read_pgm(&files[3])?;
        for (p, f) in [(&aop, &files[0]), (&dop, &files[1]), (&li, &files[2])] {
            if p.rows != rows || p.cols != cols {
                return Err(format_err(f, "raster size differs from the mask"));
            }
        }
        let conv = |v: Vec<f32>| v.into_iter().map(|x| T::lit(x as f64)).collect();
        Self::from_channels(rows, cols, conv(aop.data), conv(dop.data), conv(li.data), mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfm_layout_is_little_endian_bottom_up() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.pfm");
        write_pfm(&p, 2, 3, &[1.0f64, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let bytes = fs::read(&p).unwrap();
        let header = b"Pf\n3 2\n-1.0\n";
        assert_eq!(&bytes[..header.len()], header);
        let first = f32::from_le_bytes(bytes[header.len()..header.len() + 4].try_into().unwrap());
        assert_eq!(first, 4.0, "bottom row comes first");
        let back = read_pfm(&p).unwrap();
        assert_eq!(back.data, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn image_set_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mask = vec![true, false, true, true, false, true, true, true, false];
        let img = ImageSet::from_channels(
            3,
            3,
            vec![f64::NAN, 0.0, 10.5, -20.25, 0.0, 89.0, 1.0, 2.0, 0.0],
            vec![0.5; 9],
            vec![2.0; 9],
            mask,
        )
        .unwrap();
        let stem = dir.path().join("sky");
        let files = img.save(&stem).unwrap();
        assert!(files[0].ends_with("sky.aop.pfm"));
        assert!(files[3].ends_with("sky.mask.pgm"));
        let back = ImageSet::<f64>::load(&stem).unwrap();
        assert_eq!(back.mask(), img.mask());
        assert!(back.aop[0].is_nan());
        assert_eq!(&back.aop[1..], &img.aop[1..]);
        assert_eq!(back.dop, img.dop);
    }

    #[test]
    fn malformed_files_report_path() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.pfm");
        fs::write(&p, b"PF\n1 1\n-1.0\n0000").unwrap();
        let e = read_pfm(&p).unwrap_err().to_string();
        assert!(e.contains("bad.pfm"), "{e}");
        fs::write(&p, b"Pf\n2 2\n-1.0\n0000").unwrap();
        assert!(read_pfm(&p).is_err());
        assert!(read_pfm(&dir.path().join("missing.pfm")).is_err());
    }
}
