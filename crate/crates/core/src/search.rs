//! Search over conjugation-symmetric assemblies for prescribed verdicts.
//!
//! The catalogue holds every conjugation orbit (a piece together with its
//! mirror image, or a single self-mirror piece) inside the grid
//! `0..=max_degree`, smallest first. Assemblies are tried as sets of one
//! orbit, then two, and so on, in a fixed order; the first one whose report
//! meets every constraint is returned after a seeded change of basis.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{zigzag_assemble, Bicomplex, CohomologyReport, Piece, ReportOptions, Step};
use crate::random::{random_basis_change, rng_from_seed};
use crate::scalar::GaussianRational;

type G = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// The Frölicher spectral sequence degenerates at the first page.
    DegenerateE1,
    /// `h^{p,q}_∂̄ = h^{p,q}_∂` at every bidegree.
    HodgeSymmetric,
    /// The `∂∂̄`-lemma fails.
    LemmaFails,
}

impl Constraint {
    pub const ALL: [Constraint; 3] = [
        Constraint::DegenerateE1,
        Constraint::HodgeSymmetric,
        Constraint::LemmaFails,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::DegenerateE1 => "degenerate_e1",
            Constraint::HodgeSymmetric => "hodge_symmetric",
            Constraint::LemmaFails => "lemma_fails",
        }
    }

    pub fn holds(self, report: &CohomologyReport) -> bool {
        match self {
            Constraint::DegenerateE1 => report.verdicts.e1_equals_einf,
            Constraint::HodgeSymmetric => report.hpq.dolbeault == report.hpq.del,
            Constraint::LemmaFails => !report.verdicts.lemma_direct,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Constraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Constraint::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown constraint `{s}` (expected one of degenerate_e1, hodge_symmetric, lemma_fails)"))
    }
}

/// Parses a comma-separated constraint list; the empty string is the empty set.
pub fn parse_constraints(list: &str) -> Result<BTreeSet<Constraint>, String> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub constraints: BTreeSet<Constraint>,
    /// Number of assemblies analysed before giving up.
    pub budget: usize,
    pub seed: u64,
    pub max_degree: usize,
    pub max_orbits: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            constraints: BTreeSet::new(),
            budget: 1000,
            seed: 0,
            max_degree: 2,
            max_orbits: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Found {
    pub pieces: Vec<Piece>,
    /// The assembly after the seeded change of basis.
    pub bicomplex: Bicomplex<G>,
    pub report: CohomologyReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Assemblies analysed, including the successful one.
    pub tried: usize,
    pub found: Option<Found>,
}

fn vertex_count(piece: &Piece) -> usize {
    match piece {
        Piece::Dot { .. } => 1,
        Piece::Square { .. } => 4,
        Piece::Zigzag { word, .. } => word.len() + 1,
    }
}

/// Every zigzag inside `0..=bound` with at most `max_len` steps, one
/// representative per isomorphism class.
fn zigzags(bound: usize, max_len: usize) -> Vec<Piece> {
    fn extend(
        bound: usize,
        max_len: usize,
        start: (usize, usize),
        word: &mut Vec<Step>,
        out: &mut Vec<Piece>,
    ) {
        if !word.is_empty() {
            let piece = Piece::Zigzag {
                start,
                word: word.clone(),
            };
            if piece.extent().is_ok_and(|(p, q)| p <= bound && q <= bound) {
                out.push(piece);
            } else {
                return;
            }
        }
        if word.len() == max_len {
            return;
        }
        for step in [Step::Up, Step::Right, Step::Down, Step::Left] {
            word.push(step);
            let valid = Piece::Zigzag {
                start,
                word: word.clone(),
            }
            .extent()
            .is_ok();
            if valid {
                extend(bound, max_len, start, word, out);
            }
            word.pop();
        }
    }
    let mut out = Vec::new();
    for p in 0..=bound {
        for q in 0..=bound {
            extend(bound, max_len, (p, q), &mut Vec::new(), &mut out);
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|z| seen.insert(z.canonical_key().expect("valid zigzag")));
    out
}

/// Conjugation orbits inside `0..=max_degree`, ordered by the largest degree
/// they reach, then by size.
pub fn orbit_catalogue(max_degree: usize) -> Vec<Vec<Piece>> {
    let mut pieces = Vec::new();
    for p in 0..=max_degree {
        for q in 0..=max_degree {
            pieces.push(Piece::Dot { p, q });
            if p < max_degree && q < max_degree {
                pieces.push(Piece::Square { p, q });
            }
        }
    }
    pieces.extend(zigzags(max_degree, 4));

    let mut seen = BTreeSet::new();
    let mut orbits: Vec<Vec<Piece>> = Vec::new();
    for piece in pieces {
        let key = piece.canonical_key().expect("catalogue pieces are valid");
        let mirror = piece.mirror();
        let mirror_key = mirror.canonical_key().expect("mirror of a valid piece");
        let orbit_key = if key <= mirror_key {
            (key.clone(), mirror_key.clone())
        } else {
            (mirror_key.clone(), key.clone())
        };
        if !seen.insert(orbit_key) {
            continue;
        }
        if key == mirror_key {
            orbits.push(vec![piece]);
        } else {
            orbits.push(vec![piece, mirror]);
        }
    }
    let reach = |orbit: &Vec<Piece>| {
        orbit
            .iter()
            .map(|p| p.extent().map(|(a, b)| a.max(b)).unwrap_or(0))
            .max()
            .unwrap_or(0)
    };
    let size = |orbit: &Vec<Piece>| orbit.iter().map(vertex_count).sum::<usize>();
    orbits.sort_by_cached_key(|o| (reach(o), size(o), o.iter().map(ToString::to_string).join(" ")));
    orbits
}

pub fn run_search(config: &SearchConfig) -> SearchOutcome {
    let catalogue = orbit_catalogue(config.max_degree);
    let opts = ReportOptions {
        hodge: false,
        r_max: None,
    };
    let mut tried = 0;
    for size in 1..=config.max_orbits.min(catalogue.len()) {
        // colexicographic: every set drawn from the first j orbits comes
        // before any set using orbit j
        let combos = (size - 1..catalogue.len()).flat_map(|last| {
            (0..last).combinations(size - 1).map(move |mut c| {
                c.push(last);
                c
            })
        });
        for combo in combos {
            if tried == config.budget {
                return SearchOutcome { tried, found: None };
            }
            tried += 1;
            let pieces: Vec<Piece> = combo.iter().flat_map(|&i| catalogue[i].clone()).collect();
            let x: Bicomplex<G> =
                zigzag_assemble(&pieces, true, None).expect("orbits are mirror-complete");
            let report = CohomologyReport::compute(&x, &opts).expect("assemblies are valid");
            if config.constraints.iter().all(|c| c.holds(&report)) {
                let mut rng = rng_from_seed(config.seed);
                let bicomplex = random_basis_change(&mut rng, &x);
                let report = CohomologyReport::compute(&bicomplex, &opts).expect("basis change keeps validity");
                return SearchOutcome {
                    tried,
                    found: Some(Found {
                        pieces,
                        bicomplex,
                        report,
                    }),
                };
            }
        }
    }
    SearchOutcome { tried, found: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_parsing() {
        let all = parse_constraints("degenerate_e1,hodge_symmetric, lemma_fails").unwrap();
        assert_eq!(all.len(), 3);
        assert!(parse_constraints("").unwrap().is_empty());
        assert!(parse_constraints("fast").is_err());
    }

    #[test]
    fn catalogue_is_mirror_complete() {
        let cat = orbit_catalogue(2);
        assert_eq!(cat[0], vec![Piece::Dot { p: 0, q: 0 }]);
        for orbit in &cat {
            let _: Bicomplex<G> = zigzag_assemble(orbit, true, None).unwrap();
        }
    }

    #[test]
    fn empty_constraints_take_the_first_assembly() {
        let out = run_search(&SearchConfig::default());
        assert_eq!(out.tried, 1);
        assert_eq!(out.found.unwrap().pieces, vec![Piece::Dot { p: 0, q: 0 }]);
    }

    #[test]
    fn lemma_failure_is_found_quickly() {
        let cfg = SearchConfig {
            constraints: parse_constraints("lemma_fails").unwrap(),
            ..SearchConfig::default()
        };
        let out = run_search(&cfg);
        assert!(out.tried < 10, "{}", out.tried);
        let found = out.found.unwrap();
        assert!(!found.report.verdicts.lemma_direct);
        // a single conjugation orbit of zigzags
        assert!(found.pieces.iter().all(|p| matches!(p, Piece::Zigzag { .. })));
        let mirrored: Vec<Piece> = found.pieces.iter().map(Piece::mirror).collect();
        let key = |ps: &[Piece]| {
            let mut k: Vec<_> = ps.iter().map(|p| p.canonical_key().unwrap()).collect();
            k.sort();
            k
        };
        assert_eq!(key(&mirrored), key(&found.pieces));
    }

    #[test]
    fn all_three_constraints() {
        let cfg = SearchConfig {
            constraints: Constraint::ALL.into_iter().collect(),
            ..SearchConfig::default()
        };
        let out = run_search(&cfg);
        let found = out.found.expect("found within the default budget");
        for c in Constraint::ALL {
            assert!(c.holds(&found.report), "{c}");
        }
        assert!(found.pieces.iter().all(|p| matches!(p, Piece::Zigzag { .. })));
    }

    #[test]
    fn budget_is_respected() {
        let cfg = SearchConfig {
            constraints: Constraint::ALL.into_iter().collect(),
            budget: 3,
            ..SearchConfig::default()
        };
        let out = run_search(&cfg);
        assert_eq!(out.tried, 3);
        assert!(out.found.is_none());
    }
}
