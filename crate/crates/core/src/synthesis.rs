//! Spec → prototype → coupling targets → coupling matrix → polynomials.

use std::fmt::Write as _;

use crate::coupling::CouplingMatrix;
use crate::error::Result;
use crate::io::design::{DesignFile, Provenance};
use crate::polynomials::{extract_polynomials, CharacteristicPolynomials};
use crate::prototype::{
    chebyshev_g_values, couplings_from_prototype, CouplingTargets, FilterSpec, LowpassPrototype,
};
use crate::scalar::Scalar;

/// Everything derived from one filter spec.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis<T: Scalar> {
    pub spec: FilterSpec<T>,
    pub prototype: LowpassPrototype<T>,
    pub targets: CouplingTargets<T>,
    pub matrix: CouplingMatrix<T>,
    pub polynomials: CharacteristicPolynomials<T>,
}

pub fn synthesize<T: Scalar>(spec: &FilterSpec<T>) -> Result<Synthesis<T>> {
    spec.validate()?;
    let prototype = chebyshev_g_values(spec.order, spec.ripple_db)?;
    let targets = couplings_from_prototype(&prototype, spec.fbw());
    let matrix = CouplingMatrix::from_couplings(&targets, spec.fbw())?;
    let polynomials = extract_polynomials(&matrix)?;
    Ok(Synthesis {
        spec: *spec,
        prototype,
        targets,
        matrix,
        polynomials,
    })
}

impl Synthesis<f64> {
    pub fn into_design(self) -> DesignFile {
        DesignFile {
            spec: self.spec,
            prototype: self.prototype,
            targets: self.targets,
            matrix: self.matrix,
            polynomials: Some(self.polynomials),
            provenance: Provenance::now(),
        }
    }
}

/// Human-readable summary of a design.
pub fn report(design: &DesignFile) -> String {
    let spec = &design.spec;
    let n = spec.order;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Filter: order {n}, f0 = {:.6} GHz, bandwidth = {:.3} MHz (FBW = {:.6}), ripple L_AR = {} dB",
        spec.f0 / 1e9,
        spec.bandwidth / 1e6,
        spec.fbw(),
        spec.ripple_db
    );

    let _ = writeln!(out, "\nChebyshev low-pass prototype (g0 = 1, Omega_c = 1)");
    for (i, g) in design.prototype.g.iter().enumerate() {
        let _ = writeln!(out, "  g{i:<3} {g:.6}");
    }

    let t = &design.targets;
    let _ = writeln!(out, "\nCoupling coefficients and external quality factors");
    let mut head = format!("  {:>9} {:>9}", "Q_ea", "Q_eb");
    let mut vals = format!("  {:>9.3} {:>9.3}", t.q_ea, t.q_eb);
    for (i, k) in t.k.iter().enumerate() {
        let _ = write!(head, " {:>7}", format!("K_c{}", i + 1));
        let _ = write!(vals, " {k:>7.3}");
    }
    let _ = writeln!(out, "{head}\n{vals}");
    let _ = writeln!(out, "  Q_e = {:.3}", t.q_ea);
    let _ = writeln!(
        out,
        "  k   = {}",
        t.k.iter().map(|k| format!("{k:.6}")).collect::<Vec<_>>().join(" ")
    );

    let m = &design.matrix;
    let _ = writeln!(
        out,
        "\nNormalized coupling matrix (qe1 = {:.6}, qen = {:.6})",
        m.qe1(),
        m.qen()
    );
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:>9.6}")).collect();
        let _ = writeln!(out, "  {}", line.join(" "));
    }

    if let Some(p) = &design.polynomials {
        let fmt_roots = |roots: &[num_complex::Complex64]| {
            if roots.is_empty() {
                "(none)".to_string()
            } else {
                roots
                    .iter()
                    .map(|z| format!("({:.6}, {:.6})", z.re, z.im))
                    .collect::<Vec<_>>()
                    .join(" ")
            }
        };
        let _ = writeln!(out, "\nCharacteristic polynomials (roots as (re, im))");
        let _ = writeln!(out, "  E (poles)              {}", fmt_roots(&p.e_roots));
        let _ = writeln!(out, "  F (reflection zeros)   {}", fmt_roots(&p.f_roots));
        let _ = writeln!(out, "  P (transmission zeros) {}", fmt_roots(&p.p_roots));
        let _ = writeln!(out, "  epsilon = {:.9}", p.epsilon);
    }
    out
}
