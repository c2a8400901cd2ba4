//! Plain-text rendering of a report: totals laid out per degree `k` as
//! `h_∂̄ h_BC h_A` triples with a Betti footer, followed by the sections
//! selected with `--checks`.

use std::fmt::Write;
use std::str::FromStr;

use ddbar_core::bicomplex::{BidegreeTable, CohomologyReport, MapKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Lemma,
    Inequalities,
    Hodge,
    Spectral,
    Sequences,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Lemma,
        Check::Inequalities,
        Check::Hodge,
        Check::Spectral,
        Check::Sequences,
    ];
}

/// Parses `all` or a comma-separated subset of the check names.
pub fn parse_checks(list: &str) -> Result<Vec<Check>, String> {
    let mut out = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if token == "all" {
            out.extend(Check::ALL);
            continue;
        }
        out.push(Check::from_str(token)?);
    }
    if out.is_empty() {
        return Err("at least one check is required".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemma" => Ok(Check::Lemma),
            "inequalities" => Ok(Check::Inequalities),
            "hodge" => Ok(Check::Hodge),
            "spectral" => Ok(Check::Spectral),
            "sequences" => Ok(Check::Sequences),
            other => Err(format!(
                "unknown check `{other}` (expected all, lemma, inequalities, hodge, spectral, sequences)"
            )),
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn opt(b: Option<bool>) -> &'static str {
    b.map_or("n/a", yes_no)
}

fn verdict(out: &mut String, name: &str, value: &str) {
    writeln!(out, "  {name:<48} {value}").unwrap();
}

fn join(values: &[usize]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// The per-degree totals table:
///
/// ```text
/// k    |        0 |        1 | ...
///      | ∂̄ BC  A | ∂̄ BC  A | ...
/// h^k  |  1  1  1 |  5  4  6 | ...
/// b_k  |        1 |        4 | ...
/// ```
pub fn totals_table(report: &CohomologyReport) -> String {
    let hk = &report.hk;
    let top = report.top_degree();
    let width = (0..=top)
        .flat_map(|k| [hk.dolbeault[k], hk.bc[k], hk.aeppli[k], report.betti[k]])
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1)
        .max(2);
    let cell = 3 * width + 2;
    let mut out = String::new();
    let mut line = |label: &str, cells: Vec<String>| {
        let body: Vec<String> = cells
            .iter()
            .map(|c| {
                let shown = c.chars().filter(|&ch| ch != '\u{304}').count();
                format!(" {}{c} ", " ".repeat(cell.saturating_sub(shown)))
            })
            .collect();
        writeln!(out, "{label:<5}|{}|", body.join("|")).unwrap();
    };
    line("k", (0..=top).map(|k| k.to_string()).collect());
    line(
        "",
        (0..=top)
            // the combining macron takes no column
            .map(|_| format!("{}∂̄ {:>width$} {:>width$}", " ".repeat(width - 1), "BC", "A"))
            .collect(),
    );
    line(
        "h^k",
        (0..=top)
            .map(|k| format!("{:>width$} {:>width$} {:>width$}", hk.dolbeault[k], hk.bc[k], hk.aeppli[k]))
            .collect(),
    );
    line("b_k", report.betti.iter().map(ToString::to_string).collect());
    out
}

/// A bidegree table drawn with `q` increasing upwards and `p` to the right.
pub fn bidegree_grid(name: &str, table: &BidegreeTable) -> String {
    let mut out = String::new();
    writeln!(out, "{name}").unwrap();
    let width = table.iter().map(|(_, _, v)| v.to_string().len()).max().unwrap_or(1);
    for q in (0..=table.q_max()).rev() {
        let row: Vec<String> = (0..=table.p_max())
            .map(|p| format!("{:>width$}", table.get(p as i64, q as i64)))
            .collect();
        writeln!(out, "  q={q:<2} {}", row.join(" ")).unwrap();
    }
    out
}

fn lemma_section(out: &mut String, r: &CohomologyReport) {
    let v = &r.verdicts;
    writeln!(out, "ddbar-lemma").unwrap();
    verdict(out, "lemma_direct (BC -> dR injective)", yes_no(v.lemma_direct));
    verdict(out, "bc_equality_all_k (h_BC + h_A = 2b)", yes_no(v.bc_equality_all_k));
    verdict(out, "lemma_equality_agree", yes_no(v.lemma_equality_agree));
    verdict(out, "bc_surjectivity_ok", yes_no(v.bc_surjectivity_ok));
    let ranks: Vec<String> = r
        .natural_maps
        .iter()
        .filter(|m| m.kind == MapKind::BcToDeRham)
        .map(|m| format!("{}/{}", m.rank, m.source_dim))
        .collect();
    verdict(out, "rank BC -> dR by k (rank/dim)", &ranks.join(" "));
}

fn inequalities_section(out: &mut String, r: &CohomologyReport) {
    let v = &r.verdicts;
    writeln!(out, "inequalities").unwrap();
    verdict(out, "frolicher_inequality_all_k (h_∂̄ >= b)", yes_no(v.frolicher_inequality_all_k));
    verdict(out, "frolicher_equality_all_k", yes_no(v.frolicher_equality_all_k));
    verdict(out, "bc_inequality_all_k (h_BC + h_A >= 2b)", yes_no(v.bc_inequality_all_k));
    verdict(out, "bc_equality_all_k", yes_no(v.bc_equality_all_k));
    verdict(out, "bc_inequality_pointwise", opt(v.bc_inequality_pointwise));
    verdict(
        out,
        "bc_inequality_pointwise_strict_somewhere",
        yes_no(v.bc_inequality_pointwise_strict_somewhere),
    );
    for k in 0..=r.top_degree() {
        let lhs = r.hk.bc[k] + r.hk.aeppli[k];
        let rhs = 2 * r.betti[k];
        let rel = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => ">",
            std::cmp::Ordering::Equal => "=",
            std::cmp::Ordering::Less => "<",
        };
        writeln!(out, "  k={k}: h_BC + h_A = {lhs} {rel} {rhs} = 2b").unwrap();
    }
}

fn hodge_section(out: &mut String, r: &CohomologyReport) {
    writeln!(out, "hodge").unwrap();
    let Some(h) = &r.hodge else {
        verdict(out, "laplacians", "not computed");
        return;
    };
    verdict(out, "ker Δ_BC by k", &join(&h.ker_laplacian_bc.totals()));
    verdict(out, "ker Δ_A by k", &join(&h.ker_laplacian_aeppli.totals()));
    verdict(out, "ker Δ_BC = h_BC at every (p,q)", yes_no(h.ker_laplacian_bc == r.hpq.bc));
    verdict(out, "ker Δ_A = h_A at every (p,q)", yes_no(h.ker_laplacian_aeppli == r.hpq.aeppli));
    verdict(out, "self_adjoint_ok", yes_no(h.self_adjoint_ok));
    verdict(out, "harmonic_ok", yes_no(h.harmonic_ok));
    verdict(out, "star_kernel_swap_ok", opt(h.star_kernel_swap_ok));
    verdict(out, "duality_ok (h_BC^{p,q} = h_A^{n-q,n-p})", opt(r.verdicts.duality_ok));
}

fn spectral_section(out: &mut String, r: &CohomologyReport) {
    let s = &r.spectral;
    writeln!(out, "spectral sequence").unwrap();
    verdict(out, "e1_equals_einf", yes_no(r.verdicts.e1_equals_einf));
    verdict(out, "degeneration page", &s.degeneration_page().to_string());
    verdict(out, "spectral_consistent (E_1 = H_∂̄, E_∞ sums = b)", yes_no(r.verdicts.spectral_consistent));
    let last = s.degeneration_page();
    for page in 1..=last {
        verdict(out, &format!("E_{page} by k"), &join(&s.page(page).totals()));
    }
}

fn sequences_section(out: &mut String, r: &CohomologyReport) {
    let v = &r.verdicts;
    let var = &r.varouchas;
    writeln!(out, "exact sequences").unwrap();
    for (name, t) in [("a", &var.a), ("b", &var.b), ("c", &var.c), ("d", &var.d), ("e", &var.e), ("f", &var.f)] {
        verdict(out, &format!("{name}^k"), &join(&t.totals()));
    }
    verdict(out, "sequences_ok", yes_no(v.sequences_ok));
    verdict(out, "structural_equalities_ok", yes_no(v.structural_equalities_ok));
    verdict(out, "bc_aeppli_identity_ok", opt(v.bc_aeppli_identity_ok));
    verdict(out, "ek_recursion_ok", yes_no(v.ek_recursion_ok));
    verdict(out, "symmetry_ok", opt(v.symmetry_ok));
    verdict(out, "euler_ok", yes_no(v.euler_ok));
    verdict(out, "euler characteristic", &r.euler_characteristic.to_string());
}

pub fn render(label: &str, report: &CohomologyReport, checks: &[Check]) -> String {
    let mut out = String::new();
    writeln!(out, "{label}").unwrap();
    writeln!(out).unwrap();
    out.push_str(&totals_table(report));
    if checks.len() == Check::ALL.len() {
        writeln!(out).unwrap();
        for (name, t) in [
            ("h^{p,q} Dolbeault", &report.hpq.dolbeault),
            ("h^{p,q} ∂", &report.hpq.del),
            ("h^{p,q} Bott-Chern", &report.hpq.bc),
            ("h^{p,q} Aeppli", &report.hpq.aeppli),
        ] {
            out.push_str(&bidegree_grid(name, t));
        }
    }
    for check in checks {
        writeln!(out).unwrap();
        match check {
            Check::Lemma => lemma_section(&mut out, report),
            Check::Inequalities => inequalities_section(&mut out, report),
            Check::Hodge => hodge_section(&mut out, report),
            Check::Spectral => spectral_section(&mut out, report),
            Check::Sequences => sequences_section(&mut out, report),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap(), Check::ALL.to_vec());
        assert_eq!(parse_checks("lemma, hodge,lemma").unwrap(), vec![Check::Lemma, Check::Hodge]);
        assert!(parse_checks("").is_err());
        assert!(parse_checks("colour").is_err());
    }
}
