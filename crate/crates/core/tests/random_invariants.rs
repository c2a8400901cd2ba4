//! Random assemblies against an oracle read off the pieces themselves.
//!
//! Over a field every bounded double complex splits into dots, squares and
//! zigzags, and each shape contributes to the cohomologies in a fixed way:
//! a vertex counts for `H_∂̄` when it carries no vertical arrow, for `H_∂`
//! when it carries no horizontal arrow, for Bott-Chern when it is a target
//! (or a dot) and for Aeppli when it is a source (or a dot). Squares
//! contribute nothing; a zigzag with `s` sources and `t` targets adds
//! `|s − t|` to one Betti number.

use std::time::Instant;

use ddbar_core::bicomplex::{BidegreeTable, CohomologyReport, Piece, ReportOptions, Step};
use ddbar_core::random::{random_case, run_random, RandomConfig};
use proptest::prelude::*;

struct Expected {
    dolbeault: Vec<Vec<usize>>,
    del: Vec<Vec<usize>>,
    bc: Vec<Vec<usize>>,
    aeppli: Vec<Vec<usize>>,
    betti: Vec<usize>,
}

fn oracle(pieces: &[Piece], p_max: usize, q_max: usize) -> Expected {
    let grid = || vec![vec![0usize; q_max + 1]; p_max + 1];
    let mut e = Expected {
        dolbeault: grid(),
        del: grid(),
        bc: grid(),
        aeppli: grid(),
        betti: vec![0; p_max + q_max + 1],
    };
    for piece in pieces {
        match piece {
            Piece::Dot { p, q } => {
                for t in [&mut e.dolbeault, &mut e.del, &mut e.bc, &mut e.aeppli] {
                    t[*p][*q] += 1;
                }
                e.betti[p + q] += 1;
            }
            Piece::Square { .. } => {}
            Piece::Zigzag { start, word } => {
                // (p, q, is_source, has_vertical, has_horizontal)
                let mut verts = vec![(start.0, start.1, matches!(word[0], Step::Up | Step::Right), false, false)];
                for s in word {
                    let last = verts.len() - 1;
                    let (p, q, src, _, _) = verts[last];
                    let vertical = matches!(s, Step::Up | Step::Down);
                    let next = match s {
                        Step::Up => (p, q + 1),
                        Step::Down => (p, q - 1),
                        Step::Right => (p + 1, q),
                        Step::Left => (p - 1, q),
                    };
                    if vertical {
                        verts[last].3 = true;
                    } else {
                        verts[last].4 = true;
                    }
                    verts.push((next.0, next.1, !src, vertical, !vertical));
                }
                let sources = verts.iter().filter(|v| v.2).count();
                let targets = verts.len() - sources;
                for &(p, q, src, vertical, horizontal) in &verts {
                    if !vertical {
                        e.dolbeault[p][q] += 1;
                    }
                    if !horizontal {
                        e.del[p][q] += 1;
                    }
                    if src {
                        e.aeppli[p][q] += 1;
                    } else {
                        e.bc[p][q] += 1;
                    }
                }
                let src_degree = verts.iter().find(|v| v.2).map(|v| v.0 + v.1).unwrap();
                if sources > targets {
                    e.betti[src_degree] += sources - targets;
                } else if targets > sources {
                    e.betti[src_degree + 1] += targets - sources;
                }
            }
        }
    }
    e
}

fn table(t: &BidegreeTable) -> Vec<Vec<usize>> {
    t.0.clone()
}

fn assert_matches_oracle(seed: u64, size: usize, conj: bool) {
    let case = random_case(seed, size, conj);
    let x = &case.bicomplex;
    let r = CohomologyReport::compute(x, &ReportOptions { hodge: false, r_max: None }).unwrap();
    let e = oracle(&case.pieces, x.p_max(), x.q_max());
    let ctx = format!("seed {seed}, pieces {:?}", case.pieces.iter().map(ToString::to_string).collect::<Vec<_>>());
    assert_eq!(table(&r.hpq.dolbeault), e.dolbeault, "dolbeault, {ctx}");
    assert_eq!(table(&r.hpq.del), e.del, "del, {ctx}");
    assert_eq!(table(&r.hpq.bc), e.bc, "bc, {ctx}");
    assert_eq!(table(&r.hpq.aeppli), e.aeppli, "aeppli, {ctx}");
    assert_eq!(r.betti, e.betti, "betti, {ctx}");
    // the lemma holds exactly when only dots and squares occur
    let only_dots_and_squares = case.pieces.iter().all(|p| !matches!(p, Piece::Zigzag { .. }));
    assert_eq!(r.verdicts.lemma_direct, only_dots_and_squares, "{ctx}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dimensions_match_the_shape_oracle(seed in any::<u64>(), size in 1usize..4, conj in any::<bool>()) {
        assert_matches_oracle(seed, size, conj);
    }

    #[test]
    fn basis_change_does_not_change_the_report(seed in any::<u64>(), size in 1usize..4) {
        let case = random_case(seed, size, true);
        let opts = ReportOptions { hodge: false, r_max: None };
        let before = CohomologyReport::compute(&case.assembled, &opts).unwrap();
        let after = CohomologyReport::compute(&case.bicomplex, &opts).unwrap();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn thousand_cases_with_conjugation() {
    let start = Instant::now();
    let cfg = RandomConfig {
        seed: 2024,
        cases: 1000,
        ..RandomConfig::default()
    };
    let summary = run_random(&cfg);
    assert!(summary.all_passed(), "{:?}", summary.first_failure);
    assert_eq!(summary.passed, 1000);
    eprintln!("1000 cases in {:?}", start.elapsed());
}

#[test]
fn cases_without_conjugation() {
    let cfg = RandomConfig {
        seed: 5,
        cases: 300,
        conjugation: false,
        size: 4,
        ..RandomConfig::default()
    };
    let summary = run_random(&cfg);
    assert!(summary.all_passed(), "{:?}", summary.first_failure);
}

#[test]
fn reruns_are_identical() {
    let cfg = RandomConfig { cases: 30, ..RandomConfig::default() };
    assert_eq!(run_random(&cfg), run_random(&cfg));
}

#[test]
fn size_zero_is_vacuous() {
    let cfg = RandomConfig { cases: 5, size: 0, ..RandomConfig::default() };
    let s = run_random(&cfg);
    assert_eq!(s.passed, 5);
    assert_eq!(random_case(9, 0, false).bicomplex.total_dim(), 0);
}
