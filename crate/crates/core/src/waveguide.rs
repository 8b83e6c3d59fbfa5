//! TE10 propagation in rectangular waveguide and the bundled band presets.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const PRESET_DATA: &str = include_str!("../data/waveguides.toml");

/// A rectangular waveguide and its recommended operating band (SI units).
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguideSpec<T> {
    pub name: String,
    /// Broad wall width, m.
    pub a: T,
    /// Narrow wall height, m.
    pub b: T,
    pub band_start: T,
    pub band_stop: T,
}

impl<T: Scalar> WaveguideSpec<T> {
    pub fn cutoff(&self) -> T {
        T::of(SPEED_OF_LIGHT) / (T::of(2.0) * self.a)
    }

    pub fn guided_wavelength(&self, f: T) -> Result<T> {
        guided_wavelength(self.a, f)
    }
}

/// TE10 cutoff frequency `c / 2a`.
pub fn cutoff_frequency<T: Scalar>(a: T) -> Result<T> {
    if !(a > T::zero() && a.is_finite()) {
        return Err(invalid(format!("waveguide width must be positive, got {a} m")));
    }
    Ok(T::of(SPEED_OF_LIGHT) / (T::of(2.0) * a))
}

/// TE10 guided wavelength `λ0 / sqrt(1 − (fc/f)²)`.
pub fn guided_wavelength<T: Scalar>(a: T, f: T) -> Result<T> {
    let fc = cutoff_frequency(a)?;
    if !(f > fc) {
        return Err(Error::BelowCutoff {
            f_hz: f.to_f64_lossy(),
            cutoff_hz: fc.to_f64_lossy(),
        });
    }
    let ratio = fc / f;
    Ok(T::of(SPEED_OF_LIGHT) / f / (T::one() - ratio * ratio).sqrt())
}

#[derive(Debug, Deserialize)]
struct PresetFile {
    preset: Vec<PresetRecord>,
}

#[derive(Debug, Deserialize)]
struct PresetRecord {
    name: String,
    #[serde(default)]
    alias: Option<String>,
    a_mm: f64,
    b_mm: f64,
    band_start_ghz: f64,
    band_stop_ghz: f64,
}

fn records() -> &'static [PresetRecord] {
    static PRESETS: OnceLock<Vec<PresetRecord>> = OnceLock::new();
    PRESETS.get_or_init(|| {
        toml::from_str::<PresetFile>(PRESET_DATA)
            .expect("bundled waveguide presets are valid")
            .preset
    })
}

/// Names of the bundled presets.
pub fn preset_names() -> Vec<String> {
    records().iter().map(|r| r.name.clone()).collect()
}

/// Looks up a bundled preset by name or alias (case-insensitive).
pub fn band_preset<T: Scalar>(name: &str) -> Result<WaveguideSpec<T>> {
    let rec = records()
        .iter()
        .find(|r| {
            r.name.eq_ignore_ascii_case(name)
                || r.alias.as_deref().is_some_and(|a| a.eq_ignore_ascii_case(name))
        })
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: preset_names(),
        })?;
    Ok(WaveguideSpec {
        name: rec.name.clone(),
        a: T::of(rec.a_mm * 1e-3),
        b: T::of(rec.b_mm * 1e-3),
        band_start: T::of(rec.band_start_ghz * 1e9),
        band_stop: T::of(rec.band_stop_ghz * 1e9),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_width_halves_cutoff() {
        let a = 0.01234f64;
        assert_eq!(cutoff_frequency(2.0 * a).unwrap() * 2.0, cutoff_frequency(a).unwrap());
    }

    #[test]
    fn rejects_non_positive_width() {
        assert!(cutoff_frequency(0.0f64).is_err());
        assert!(cutoff_frequency(-1.0f64).is_err());
        assert!(guided_wavelength(-1.0f64, 1e9).is_err());
    }

    #[test]
    fn below_cutoff_is_an_error() {
        let wg = band_preset::<f64>("WR3").unwrap();
        assert!(matches!(
            wg.guided_wavelength(100e9),
            Err(Error::BelowCutoff { .. })
        ));
        assert!(wg.guided_wavelength(wg.cutoff()).is_err());
    }

    #[test]
    fn presets_satisfy_their_invariants() {
        for name in preset_names() {
            let wg = band_preset::<f64>(&name).unwrap();
            assert!(wg.a > wg.b && wg.b > 0.0);
            assert!(wg.band_start > wg.cutoff());
            assert!(wg.band_stop > wg.band_start);
        }
    }

    #[test]
    fn unknown_preset_lists_available() {
        match band_preset::<f64>("WR999") {
            Err(Error::UnknownPreset { available, .. }) => {
                assert!(available.contains(&"WG16".to_string()));
                assert!(available.contains(&"WR3".to_string()));
            }
            other => panic!("expected unknown preset, got {other:?}"),
        }
        assert!(band_preset::<f64>("wg16").is_ok());
    }
}
