//! Touchstone v1 two-port files.
//!
//! Written as `# GHz S RI R 50` with one row per frequency:
//! `freq S11re S11im S21re S21im S12re S12im S22re S22im`. The reader also
//! accepts Hz/kHz/MHz units and MA/DB data formats.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::response::{FrequencyResponse, GridDomain};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: Some(line),
        message: message.into(),
    }
}

/// Renders a Hz-domain response. S12 is written equal to S21 (reciprocal
/// network); S22 falls back to S11 when the response does not carry it.
pub fn to_string(resp: &FrequencyResponse<f64>) -> String {
    let mut out = String::new();
    out.push_str("! two-port S-parameters, normalized coupling-matrix model\n");
    out.push_str("# GHz S RI R 50\n");
    let s22 = resp.s22.as_deref().unwrap_or(&resp.s11);
    for i in 0..resp.len() {
        let (s11, s21, s22) = (resp.s11[i], resp.s21[i], s22[i]);
        let _ = writeln!(
            out,
            "{:e} {:e} {:e} {:e} {:e} {:e} {:e} {:e} {:e}",
            resp.grid[i] / 1e9,
            s11.re,
            s11.im,
            s21.re,
            s21.im,
            s21.re,
            s21.im,
            s22.re,
            s22.im
        );
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum DataFormat {
    Ri,
    Ma,
    Db,
}

fn decode(format: DataFormat, a: f64, b: f64) -> Complex64 {
    match format {
        DataFormat::Ri => Complex64::new(a, b),
        DataFormat::Ma => Complex64::from_polar(a, b.to_radians()),
        DataFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
    }
}

/// Parses a two-port Touchstone v1 document into a Hz-domain response.
pub fn parse(text: &str) -> Result<FrequencyResponse<f64>> {
    let mut unit = 1e9;
    let mut format = DataFormat::Ma;
    let mut seen_option = false;
    let mut values: Vec<(usize, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(opts) = line.strip_prefix('#') {
            if seen_option {
                continue;
            }
            seen_option = true;
            let mut tokens = opts.split_whitespace().map(str::to_ascii_uppercase);
            while let Some(tok) = tokens.next() {
                match tok.as_str() {
                    "HZ" => unit = 1.0,
                    "KHZ" => unit = 1e3,
                    "MHZ" => unit = 1e6,
                    "GHZ" => unit = 1e9,
                    "S" => {}
                    "Y" | "Z" | "H" | "G" => {
                        return Err(parse_err(lineno, format!("only S-parameters are supported, got {tok}")))
                    }
                    "RI" => format = DataFormat::Ri,
                    "MA" => format = DataFormat::Ma,
                    "DB" => format = DataFormat::Db,
                    "R" => {
                        tokens.next();
                    }
                    other => return Err(parse_err(lineno, format!("unknown option `{other}`"))),
                }
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("not a number: `{tok}`")))?;
            values.push((lineno, v));
        }
    }

    if !values.len().is_multiple_of(9) {
        let line = values.last().map_or(0, |v| v.0);
        return Err(parse_err(
            line,
            format!("two-port data needs 9 values per frequency, got {} values", values.len()),
        ));
    }
    let n = values.len() / 9;
    let mut grid = Vec::with_capacity(n);
    let (mut s11, mut s21, mut s22) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for row in values.chunks(9) {
        let v: Vec<f64> = row.iter().map(|x| x.1).collect();
        if let Some(&prev) = grid.last() {
            if !(v[0] * unit > prev) {
                return Err(parse_err(row[0].0, "frequencies must be strictly ascending"));
            }
        }
        grid.push(v[0] * unit);
        s11.push(decode(format, v[1], v[2]));
        s21.push(decode(format, v[3], v[4]));
        s22.push(decode(format, v[7], v[8]));
    }
    let mut resp = FrequencyResponse::new(grid, GridDomain::Hertz, s11, s21)?;
    resp.s22 = Some(s22);
    Ok(resp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_magnitude_angle_and_db() {
        let text = "! c\n# MHz S MA R 50\n100 0.5 90 1 0 1 0 0.5 0\n200 0.1 0 0.9 180 0.9 180 0.1 0\n";
        let r = parse(text).unwrap();
        assert_eq!(r.grid, vec![100e6, 200e6]);
        assert!((r.s11[0] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((r.s21[1] - Complex64::new(-0.9, 0.0)).norm() < 1e-15);

        let text = "# Hz S DB R 50\n1 -20 0 0 0 0 0 -20 0\n";
        let r = parse(text).unwrap();
        assert!((r.s11[0].norm() - 0.1).abs() < 1e-15);
        assert!((r.s21[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_ragged_and_garbage() {
        assert!(parse("# GHz S RI R 50\n1 0 0 0 0\n").is_err());
        match parse("# GHz S RI R 50\n1 0 0 0 x 0 0 0 0\n") {
            Err(Error::Parse { line: Some(2), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("# GHz Z RI R 50\n").is_err());
        assert!(parse("# GHz S RI R 50\n2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n").is_err());
    }
}
