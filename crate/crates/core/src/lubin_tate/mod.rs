//! Lubin–Tate formal groups over `O` at joint `π`-adic and degree precision.
//!
//! Series with denominators (`log`, `exp`) carry [`PNum`] coefficients;
//! integral series (`f_π`, `[a]`, the group law) are reduced to `O/π^M`.

pub mod formal;
pub mod tower;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::localfield::{El, PField, PNum, TruncRing};
use crate::series::Series;

pub use formal::{is_small, lt_exp, lt_log, working_precision, FormalGroup, IdentityReport, Source};
pub use tower::{torsion_tower, weierstrass, Tower, TowerEl, TowerJson, TowerReport, TowerRing, UnitActionReport};

/// A coefficient `π^val · unit` with the unit's digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffJson {
    pub val: i64,
    pub digits: Vec<u32>,
}

fn mono_key(exps: &[u16]) -> String {
    let vars = ["X", "Y", "Z"];
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { vars[i].to_string() } else { format!("{}^{e}", vars[i]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Monomial → digit list for a series over `O/π^M`, zero terms omitted.
pub fn integral_series_json(ring: &TruncRing, a: &Series<El>) -> BTreeMap<String, Vec<u32>> {
    a.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| (mono_key(a.layout().monomial(i)), ring.digits(c)))
        .collect()
}

/// Monomial → `(valuation, unit digits)` for a series over `E`; exact zeros omitted.
pub fn series_json(pf: &PField, a: &Series<PNum>) -> BTreeMap<String, CoeffJson> {
    a.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !pf.is_exact_zero(c))
        .map(|(i, c)| {
            let (val, digits) = pf.parts(c);
            (mono_key(a.layout().monomial(i)), CoeffJson { val, digits })
        })
        .collect()
}
