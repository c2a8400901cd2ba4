//! Structure equations of a Lie algebra with complex structure, compiled into
//! the bicomplex of left-invariant forms.
//!
//! The coframe is `φ^1..φ^n`; each `dφ^i` is a combination of `φ^j∧φ^k`
//! (type `"20"`), `φ^j∧φ̄^k` (`"11"`) and `φ̄^j∧φ̄^k` (`"02"`, forbidden by
//! integrability). Indices are 1-based in files and 0-based in code. The
//! differential is extended to all forms by the Leibniz rule, with
//! `dφ̄^i = conj(dφ^i)`, and split by bidegree into `∂` and `∂̄`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{format::Block, Bicomplex, ExteriorBasis};
use crate::error::ModelError;
use crate::hodge::MetricData;
use crate::linalg::Matrix;
use crate::scalar::{Field, GaussianRational};

type G = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermType {
    #[serde(rename = "20")]
    HoloHolo,
    #[serde(rename = "11")]
    HoloAnti,
    #[serde(rename = "02")]
    AntiAnti,
}

/// `coeff · φ^j ∧ φ^k`, `coeff · φ^j ∧ φ̄^k` or `coeff · φ̄^j ∧ φ̄^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    #[serde(rename = "type")]
    pub kind: TermType,
    pub j: usize,
    pub k: usize,
    pub coeff: G,
}

impl Term {
    pub fn new(kind: TermType, j: usize, k: usize, coeff: impl Into<G>) -> Self {
        Term {
            kind,
            j,
            k,
            coeff: coeff.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEquations {
    pub name: String,
    pub n: usize,
    /// `dphi[i]` lists the terms of `dφ^{i+1}`.
    pub dphi: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gram: Vec<Block>,
}

/// A form as a map from monomial bitmask to nonzero coefficient.
type Form = BTreeMap<u32, G>;

fn add_term(form: &mut Form, mask: u32, c: G) {
    if c.is_zero() {
        return;
    }
    let entry = form.entry(mask).or_insert_with(G::zero);
    *entry += &c;
    if entry.is_zero() {
        form.remove(&mask);
    }
}

/// Largest complex dimension accepted; keeps monomials inside a `u32`.
pub const MAX_DIMENSION: usize = 8;

impl StructureEquations {
    pub fn zero(name: &str, n: usize) -> Self {
        StructureEquations {
            name: name.to_string(),
            n,
            dphi: vec![Vec::new(); n],
            gram: Vec::new(),
        }
    }

    /// `dφ^i` (0-based) as a form. Terms with bad indices are skipped; they
    /// are reported by [`validate_model`].
    fn d_generator_holo(&self, i: usize) -> Form {
        let n = self.n;
        let mut form = Form::new();
        for t in &self.dphi[i] {
            if t.j == 0 || t.k == 0 || t.j > n || t.k > n {
                continue;
            }
            let (a, b) = match t.kind {
                TermType::HoloHolo => (t.j - 1, t.k - 1),
                TermType::HoloAnti => (t.j - 1, n + t.k - 1),
                TermType::AntiAnti => (n + t.j - 1, n + t.k - 1),
            };
            if let Some((mask, sign)) = ExteriorBasis::wedge(1 << a, 1 << b) {
                add_term(&mut form, mask, t.coeff.clone() * G::from(sign));
            }
        }
        form
    }
}

/// Leibniz extension of the structure equations to all monomials.
struct Differential {
    basis: ExteriorBasis,
    /// `d` of each of the `2n` generators.
    generators: Vec<Form>,
}

impl Differential {
    fn new(s: &StructureEquations) -> Self {
        let basis = ExteriorBasis::new(s.n);
        let holo: Vec<Form> = (0..s.n).map(|i| s.d_generator_holo(i)).collect();
        let anti: Vec<Form> = holo
            .iter()
            .map(|form| {
                let mut out = Form::new();
                for (&mask, c) in form {
                    let (m, sign) = basis.conjugate(mask);
                    add_term(&mut out, m, c.conj() * G::from(sign));
                }
                out
            })
            .collect();
        Differential {
            basis,
            generators: holo.into_iter().chain(anti).collect(),
        }
    }

    fn apply_monomial(&self, mask: u32) -> Form {
        let mut out = Form::new();
        let mut t = 0;
        let mut rest = mask;
        while rest != 0 {
            let g = rest.trailing_zeros();
            rest &= rest - 1;
            let before = mask & ((1u32 << g) - 1);
            let after = rest;
            let sign = if t % 2 == 0 { 1 } else { -1 };
            for (&m, c) in &self.generators[g as usize] {
                let Some((left, s1)) = ExteriorBasis::wedge(before, m) else {
                    continue;
                };
                let Some((full, s2)) = ExteriorBasis::wedge(left, after) else {
                    continue;
                };
                add_term(&mut out, full, c.clone() * G::from(sign * s1 * s2));
            }
            t += 1;
        }
        out
    }

    fn apply(&self, form: &Form) -> Form {
        let mut out = Form::new();
        for (&mask, c) in form {
            for (m, c2) in self.apply_monomial(mask) {
                add_term(&mut out, m, c.mul_ref(&c2));
            }
        }
        out
    }
}

/// Returns the violated conditions: index ranges, integrability (no
/// `φ̄∧φ̄` terms) and `d² = 0` on every generator.
pub fn validate_model(s: &StructureEquations) -> Vec<String> {
    let mut out = Vec::new();
    if s.n == 0 || s.n > MAX_DIMENSION {
        out.push(format!("n = {} outside 1..={MAX_DIMENSION}", s.n));
        return out;
    }
    if s.dphi.len() != s.n {
        out.push(format!("dphi has {} entries, expected n = {}", s.dphi.len(), s.n));
        return out;
    }
    for (i, terms) in s.dphi.iter().enumerate() {
        for t in terms {
            if t.j == 0 || t.k == 0 || t.j > s.n || t.k > s.n {
                out.push(format!("dφ^{}: index ({},{}) outside 1..={}", i + 1, t.j, t.k, s.n));
            } else if t.j == t.k && t.kind != TermType::HoloAnti {
                out.push(format!("dφ^{}: repeated index {} in a {:?} term", i + 1, t.j, t.kind));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let d = Differential::new(s);
    for i in 0..s.n {
        let dphi = &d.generators[i];
        if dphi
            .keys()
            .any(|&m| d.basis.bidegree(m) == (0, 2))
        {
            out.push(format!("dφ^{} has a (0,2) component (not integrable)", i + 1));
        }
    }
    for i in 0..s.n {
        if !d.apply(&d.generators[i]).is_empty() {
            out.push(format!("d²φ^{} ≠ 0 (Jacobi identity fails)", i + 1));
        }
    }
    out
}

pub fn parse_model(text: &str) -> Result<StructureEquations, ModelError> {
    serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))
}

pub fn write_model(s: &StructureEquations) -> String {
    serde_json::to_string_pretty(s).expect("serializable")
}

/// A compiled model: the bicomplex of invariant forms with conjugation,
/// exterior basis and metric attached.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorModel {
    pub equations: StructureEquations,
    pub bicomplex: Bicomplex<G>,
    pub metric: MetricData<G>,
}

impl ExteriorModel {
    pub fn basis(&self) -> &ExteriorBasis {
        self.bicomplex.exterior().expect("compiled models carry a basis")
    }
}

pub fn compile(s: &StructureEquations) -> Result<ExteriorModel, ModelError> {
    let violations = validate_model(s);
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }
    let n = s.n;
    let d = Differential::new(s);
    let basis = d.basis.clone();
    let dims: Vec<Vec<usize>> = basis
        .monomials
        .iter()
        .map(|row| row.iter().map(Vec::len).collect())
        .collect();
    let mut x: Bicomplex<G> = Bicomplex::new(n, n, &dims);
    for p in 0..=n {
        for q in 0..=n {
            let (pi, qi) = (p as i64, q as i64);
            let mut del = x.del(pi, qi).into_owned();
            let mut delbar = x.delbar(pi, qi).into_owned();
            let mut conj = Matrix::zeros(dims[q][p], dims[p][q]);
            for (col, &mask) in basis.monomials[p][q].iter().enumerate() {
                for (m, c) in d.apply_monomial(mask) {
                    let row = basis.index_of(m);
                    match basis.bidegree(m) {
                        b if b == (p + 1, q) => del[(row, col)] = c,
                        b if b == (p, q + 1) => delbar[(row, col)] = c,
                        b => unreachable!("integrable model produced bidegree {b:?}"),
                    }
                }
                let (m, sign) = basis.conjugate(mask);
                conj[(basis.index_of(m), col)] = G::from(sign);
            }
            x.set_del(p, q, del).expect("shape from basis");
            x.set_delbar(p, q, delbar).expect("shape from basis");
            x.set_conj(p, q, conj).expect("shape from basis");
        }
    }
    x.set_n(Some(n));
    x.set_exterior(basis);

    let mut blocks = Vec::new();
    for b in &s.gram {
        let d = x.dim(b.p as i64, b.q as i64);
        if b.matrix.len() != d || b.matrix.iter().any(|r| r.len() != d) {
            return Err(ModelError::Invalid(vec![format!(
                "gram block at ({},{}) must be {d}x{d}",
                b.p, b.q
            )]));
        }
        blocks.push((b.p, b.q, Matrix::from_rows(d, b.matrix.clone())));
    }
    let metric =
        MetricData::from_blocks(&x, &blocks).map_err(|e| ModelError::Invalid(vec![e.to_string()]))?;
    Ok(ExteriorModel {
        equations: s.clone(),
        bicomplex: x,
        metric,
    })
}

/// `dφ^1 = dφ^2 = 0`, `dφ^3 = −φ^1 ∧ φ^2`: the complex Heisenberg group.
pub fn iwasawa() -> StructureEquations {
    let mut s = StructureEquations::zero("iwasawa", 3);
    s.dphi[2].push(Term::new(TermType::HoloHolo, 1, 2, -1));
    s
}

/// The abelian model of complex dimension `n`.
pub fn torus(n: usize) -> StructureEquations {
    StructureEquations::zero(&format!("torus{n}"), n)
}

/// `dφ^1 = 0`, `dφ^2 = φ^1 ∧ φ̄^1`: a primary Kodaira surface.
pub fn kodaira_thurston() -> StructureEquations {
    let mut s = StructureEquations::zero("kodaira_thurston", 2);
    s.dphi[1].push(Term::new(TermType::HoloAnti, 1, 1, 1));
    s
}

pub fn builtin_names() -> Vec<String> {
    let mut names = vec!["iwasawa".to_string(), "kodaira_thurston".to_string()];
    names.extend((1..=4).map(|n| format!("torus{n}")));
    names
}

/// Looks up a builtin model: `iwasawa`, `kodaira_thurston`, or `torusN` /
/// `torus_N` for `1 ≤ N ≤ MAX_DIMENSION`.
pub fn builtin(name: &str) -> Result<StructureEquations, ModelError> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "iwasawa" => return Ok(iwasawa()),
        "kodaira_thurston" | "kodaira-thurston" => return Ok(kodaira_thurston()),
        _ => {}
    }
    lower
        .strip_prefix("torus")
        .map(|rest| rest.trim_start_matches(['_', '-']))
        .and_then(|digits| digits.parse::<usize>().ok())
        .filter(|n| (1..=MAX_DIMENSION).contains(n))
        .map(torus)
        .ok_or_else(|| ModelError::UnknownBuiltin(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iwasawa_differentials() {
        let model = compile(&iwasawa()).unwrap();
        let x = &model.bicomplex;
        assert!(x.is_valid(), "{:?}", x.validate());
        assert_eq!(x.total_dim(), 64);
        let basis = model.basis();
        // columns of V^{1,0} are φ1, φ2, φ3; rows of V^{2,0} are φ12, φ13, φ23
        let del = x.del(1, 0);
        assert_eq!(del.column(2), vec![G::from(-1), G::from(0), G::from(0)]);
        assert!(x.delbar(1, 0).is_zero());
        let delbar = x.delbar(0, 1);
        assert_eq!(delbar.column(2), vec![G::from(-1), G::from(0), G::from(0)]);
        assert_eq!(basis.label(basis.monomials[2][0][0]), "φ1∧φ2");
    }

    #[test]
    fn dimensions_are_binomial() {
        let model = compile(&torus(3)).unwrap();
        let x = &model.bicomplex;
        let binom = |n: usize, k: usize| (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1));
        for k in 0..=6i64 {
            let total: usize = (0..=k).map(|p| x.dim(p, k - p)).sum();
            assert_eq!(total, binom(6, k as usize));
        }
        assert_eq!(x.dim(1, 2), 9);
    }

    #[test]
    fn validation_catches_bad_models() {
        let mut s = torus(3);
        s.dphi[0].push(Term::new(TermType::AntiAnti, 1, 2, 1));
        let v = validate_model(&s);
        assert!(v.iter().any(|m| m.contains("(0,2)")), "{v:?}");

        // dφ^a = φ^b∧φ^c over cyclic-ish (a,b,c): every d²φ^a is a multiple
        // of a repeated wedge, so Jacobi holds
        let mut s = torus(3);
        s.dphi[0].push(Term::new(TermType::HoloHolo, 2, 3, 1));
        s.dphi[1].push(Term::new(TermType::HoloHolo, 1, 3, 1));
        s.dphi[2].push(Term::new(TermType::HoloHolo, 1, 2, 1));
        assert!(validate_model(&s).is_empty());

        let mut s = torus(2);
        s.dphi[0].push(Term::new(TermType::HoloHolo, 1, 3, 1));
        assert!(!validate_model(&s).is_empty());

        // dφ2 = φ1∧φ̄1, dφ3 = φ2∧φ̄1: d²φ3 = φ1∧φ̄1∧φ̄1 = 0; dφ4 = φ3∧φ2 has
        // d²φ4 = −φ3∧φ1∧φ̄1 ≠ 0
        let mut s = torus(4);
        s.dphi[1].push(Term::new(TermType::HoloAnti, 1, 1, 1));
        s.dphi[2].push(Term::new(TermType::HoloAnti, 2, 1, 1));
        assert!(validate_model(&s).is_empty());
        s.dphi[3].push(Term::new(TermType::HoloHolo, 3, 2, 1));
        let v = validate_model(&s);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("d²φ^4"));
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin("torus_3").unwrap(), torus(3));
        assert_eq!(builtin("torus3").unwrap(), torus(3));
        assert_eq!(builtin("iwasawa").unwrap(), iwasawa());
        assert!(matches!(builtin("nope"), Err(ModelError::UnknownBuiltin(_))));
        assert!(builtin("torus0").is_err());
    }

    #[test]
    fn model_json_round_trip() {
        let s = iwasawa();
        assert_eq!(parse_model(&write_model(&s)).unwrap(), s);
        assert!(matches!(
            parse_model(r#"{"name": "x", "n": 1, "dphi": [[]], "extra": 1}"#),
            Err(ModelError::Parse(_))
        ));
    }
}
