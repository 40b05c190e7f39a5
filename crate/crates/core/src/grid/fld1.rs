//! The `FLD1` text format.
//!
//! ```text
//! FLD1 n=<int> center=<re>,<im> half_width=<real>
//! i,j,re,im            (n^2 lines, i outer)
//! ```
//!
//! Sample values are written with 17 significant digits, which round-trips
//! every `f64` exactly and keeps output byte-identical between runs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::ComplexField;
use super::spec::GridSpec;
use crate::error::{Error, Result};

pub fn write_fld1<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let spec = field.spec();
    writeln!(
        out,
        "FLD1 n={} center={},{} half_width={}",
        spec.n(),
        spec.center().re,
        spec.center().im,
        spec.half_width()
    )?;
    let n = spec.n();
    for (k, v) in field.samples().iter().enumerate() {
        writeln!(out, "{},{},{:.16e},{:.16e}", k / n, k % n, v.re, v.im)?;
    }
    Ok(())
}

pub fn read_fld1<R: Read>(input: R) -> Result<ComplexField> {
    let mut lines = BufReader::new(input).lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "empty input"))??;
    let spec = parse_header(&header)?;
    let n = spec.n();
    let mut data = vec![Complex64::new(0.0, 0.0); spec.len()];
    let mut seen = 0usize;
    for (lineno, line) in lines.enumerate() {
        let lineno = lineno + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.trim().split(',').collect();
        if parts.len() != 4 {
            return Err(parse_err(lineno, "expected i,j,re,im"));
        }
        let i: usize = parts[0].parse().map_err(|_| parse_err(lineno, "bad i"))?;
        let j: usize = parts[1].parse().map_err(|_| parse_err(lineno, "bad j"))?;
        let re: f64 = parts[2].parse().map_err(|_| parse_err(lineno, "bad re"))?;
        let im: f64 = parts[3].parse().map_err(|_| parse_err(lineno, "bad im"))?;
        if i >= n || j >= n {
            return Err(parse_err(lineno, "index out of range"));
        }
        if i * n + j != seen {
            return Err(parse_err(lineno, "samples out of row-major order"));
        }
        data[seen] = Complex64::new(re, im);
        seen += 1;
    }
    if seen != spec.len() {
        return Err(parse_err(seen + 2, "truncated sample list"));
    }
    ComplexField::from_samples(spec, data)
}

pub fn save_fld1(field: &ComplexField, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_fld1(field, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_fld1(path: impl AsRef<Path>) -> Result<ComplexField> {
    read_fld1(File::open(path)?)
}

fn parse_header(line: &str) -> Result<GridSpec> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("FLD1") {
        return Err(parse_err(1, "missing FLD1 magic"));
    }
    let (mut n, mut center, mut hw) = (None, None, None);
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(1, "expected key=value"))?;
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|_| parse_err(1, "bad n"))?),
            "center" => {
                let (re, im) = value
                    .split_once(',')
                    .ok_or_else(|| parse_err(1, "center needs re,im"))?;
                let re = re.parse().map_err(|_| parse_err(1, "bad center"))?;
                let im = im.parse().map_err(|_| parse_err(1, "bad center"))?;
                center = Some(Complex64::new(re, im));
            }
            "half_width" => {
                hw = Some(value.parse::<f64>().map_err(|_| parse_err(1, "bad half_width"))?)
            }
            other => return Err(parse_err(1, &format!("unknown header key {other}"))),
        }
    }
    match (n, center, hw) {
        (Some(n), Some(c), Some(hw)) => GridSpec::new(c, hw, n),
        _ => Err(parse_err(1, "header needs n, center and half_width")),
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Fld1 {
        line,
        msg: msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let g = GridSpec::new(Complex64::new(0.5, -0.25), 4.0, 16).unwrap();
        let f = ComplexField::identity(g);
        let mut buf = Vec::new();
        write_fld1(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("FLD1 n=16 center=0.5,-0.25 half_width=4"));
        assert_eq!(lines.clone().count(), 256);
        assert!(lines.next().unwrap().starts_with("0,0,"));
    }

    #[test]
    fn rejects_truncated_and_disordered_input() {
        let bad = "FLD1 n=16 center=0,0 half_width=1\n0,0,1,0\n";
        assert!(matches!(read_fld1(bad.as_bytes()), Err(Error::Fld1 { .. })));
        let swapped = "FLD1 n=16 center=0,0 half_width=1\n0,1,1,0\n0,0,1,0\n";
        assert!(read_fld1(swapped.as_bytes()).is_err());
        assert!(read_fld1("FLD2 n=16".as_bytes()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), hw in 0.1f64..100.0) {
            let g = GridSpec::new(Complex64::new(hw / 3.0, -hw / 7.0), hw, 16).unwrap();
            let f = ComplexField::from_fn(g, |z| {
                let t = (seed as f64).sin() * 1e3;
                Complex64::new((z.re * t).sin() * 1e-7, (z.im + t).cos() * 1e9)
            }).unwrap();
            let mut buf = Vec::new();
            write_fld1(&f, &mut buf).unwrap();
            let back = read_fld1(buf.as_slice()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
