//! Plot-ready CSV sweeps: `freq_hz,s11_re,s11_im,s21_re,s21_im`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::response::{FrequencyResponse, GridDomain};

pub const HEADER: &str = "freq_hz,s11_re,s11_im,s21_re,s21_im";

pub fn to_string(resp: &FrequencyResponse<f64>) -> String {
    let mut out = String::with_capacity(resp.len() * 100);
    out.push_str(HEADER);
    out.push('\n');
    for i in 0..resp.len() {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e}",
            resp.grid[i], resp.s11[i].re, resp.s11[i].im, resp.s21[i].re, resp.s21[i].im
        );
    }
    out
}

pub fn parse(text: &str) -> Result<FrequencyResponse<f64>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim().replace(' ', "") == HEADER => {}
        Some((i, h)) => {
            return Err(Error::Parse {
                line: Some(i + 1),
                message: format!("expected header `{HEADER}`, got `{}`", h.trim()),
            })
        }
        None => {
            return Err(Error::Parse {
                line: None,
                message: "empty CSV file".into(),
            })
        }
    }
    let (mut grid, mut s11, mut s21) = (Vec::new(), Vec::new(), Vec::new());
    for (i, line) in lines {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: Some(i + 1),
                message: format!("bad number: {e}"),
            })?;
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: Some(i + 1),
                message: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        grid.push(fields[0]);
        s11.push(Complex64::new(fields[1], fields[2]));
        s21.push(Complex64::new(fields[3], fields[4]));
    }
    FrequencyResponse::new(grid, GridDomain::Hertz, s11, s21).map_err(|e| Error::Parse {
        line: None,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_checked() {
        assert!(parse("f,a,b,c,d\n1,0,0,0,0\n").is_err());
        assert!(parse("").is_err());
        let r = parse(&format!("{HEADER}\n1e9,0.1,0,0.9,0\n2e9,0.2,0,0.8,0.1\n")).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.s21[1], Complex64::new(0.8, 0.1));
        assert!(parse(&format!("{HEADER}\n1e9,0.1,0,0.9\n")).is_err());
    }
}
