use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::hodge::{hodge_summary, HodgeSummary, MetricData};
use crate::scalar::Field;

use super::checks::{
    check_conjugation_symmetries, check_duality, check_sequences, check_structural_equalities,
    ek_recursion_check, equality_characterization, inequality_verdicts, bc_aeppli_identity_check,
    InequalityVerdicts,
};
use super::cohomology::{local_dims, varouchas_from_grid, HpqTables, VarouchasDims};
use super::maps::{bc_surjectivity_from, natural_map_ranks, MapKind, MapRank};
use super::spectral::{default_r_max, spectral_page_dims, SpectralPages};
use super::{betti, Bicomplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Assemble the Laplacians and run the harmonic checks.
    pub hodge: bool,
    /// Last spectral page; defaults to `p_max + q_max + 2`.
    pub r_max: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            hodge: true,
            r_max: None,
        }
    }
}

/// Totals `h^k = Σ_{p+q=k} h^{p,q}` for each flavor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkTotals {
    pub dolbeault: Vec<usize>,
    pub del: Vec<usize>,
    pub bc: Vec<usize>,
    pub aeppli: Vec<usize>,
}

/// Named boolean outcomes. `None` marks checks whose hypotheses do not hold
/// (no conjugation, no complex dimension).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub frolicher_inequality_all_k: bool,
    pub frolicher_equality_all_k: bool,
    pub bc_inequality_all_k: bool,
    pub bc_equality_all_k: bool,
    pub bc_inequality_pointwise: Option<bool>,
    pub bc_inequality_pointwise_strict_somewhere: bool,
    pub lemma_direct: bool,
    pub lemma_equality_agree: bool,
    pub e1_equals_einf: bool,
    pub spectral_consistent: bool,
    pub euler_ok: bool,
    pub symmetry_ok: Option<bool>,
    pub duality_ok: Option<bool>,
    pub sequences_ok: bool,
    pub structural_equalities_ok: bool,
    pub bc_aeppli_identity_ok: Option<bool>,
    pub ek_recursion_ok: bool,
    pub bc_surjectivity_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub p_max: usize,
    pub q_max: usize,
    pub n: Option<usize>,
    pub conjugation: bool,
    pub hpq: HpqTables,
    pub hk: HkTotals,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    pub varouchas: VarouchasDims,
    pub spectral: SpectralPages,
    pub natural_maps: Vec<MapRank>,
    pub inequalities: InequalityVerdicts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<HodgeSummary>,
    pub verdicts: Verdicts,
}

fn alternating(values: impl IntoIterator<Item = usize>) -> i64 {
    values
        .into_iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

impl CohomologyReport {
    /// Full analysis with the orthonormal metric.
    pub fn compute<F: Field>(x: &Bicomplex<F>, opts: &ReportOptions) -> Result<Self, AnalysisError> {
        Self::compute_with_metric(x, opts, None)
    }

    pub fn compute_with_metric<F: Field>(
        x: &Bicomplex<F>,
        opts: &ReportOptions,
        metric: Option<&MetricData<F>>,
    ) -> Result<Self, AnalysisError> {
        let violations = x.validate();
        if !violations.is_empty() {
            return Err(AnalysisError::Invalid(
                violations.iter().map(ToString::to_string).collect(),
            ));
        }
        let top = x.top_degree() as i64;
        let grid = local_dims(x)?;
        let hpq = HpqTables::from_grid(&grid);
        let varouchas = varouchas_from_grid(&grid);
        let betti: Vec<usize> = (0..=top).map(|k| betti(x, k)).collect();
        let hk = HkTotals {
            dolbeault: hpq.dolbeault.totals(),
            del: hpq.del.totals(),
            bc: hpq.bc.totals(),
            aeppli: hpq.aeppli.totals(),
        };
        let spectral = spectral_page_dims(x, opts.r_max.unwrap_or_else(|| default_r_max(x)))?;
        let natural_maps = natural_map_ranks(x)?;
        let conjugation = x.has_conjugation();
        let inequalities = inequality_verdicts(&hpq, &betti, conjugation);

        let bc_to_dr: Vec<usize> = natural_maps
            .iter()
            .filter(|m| m.kind == MapKind::BcToDeRham)
            .map(|m| m.rank)
            .collect();
        let lemma_direct = natural_maps
            .iter()
            .filter(|m| m.kind == MapKind::BcToDeRham)
            .all(MapRank::injective);
        let bc_equality = equality_characterization(&hpq, &betti);

        let euler_dims = alternating((0..=top).map(|k| {
            (0..=k).map(|p| x.dim(p, k - p)).sum::<usize>()
        }));
        let euler_characteristic = alternating(betti.iter().copied());
        let euler_ok = euler_characteristic == euler_dims
            && alternating(hk.dolbeault.iter().copied()) == euler_dims;
        let spectral_consistent =
            *spectral.e1() == hpq.dolbeault && spectral.e_infinity().totals() == betti;

        let symmetry_ok = conjugation
            .then(|| check_conjugation_symmetries(x, &hpq, &varouchas))
            .transpose()?;
        let bc_aeppli_identity_ok = conjugation
            .then(|| bc_aeppli_identity_check(x, &hpq, &varouchas))
            .transpose()?;
        let duality_ok = x
            .n()
            .filter(|&n| x.p_max() == n && x.q_max() == n)
            .map(|n| check_duality(&hpq, &varouchas, &betti, n));

        let verdicts = Verdicts {
            frolicher_inequality_all_k: inequalities.frolicher_all_k,
            frolicher_equality_all_k: inequalities.frolicher_equality(),
            bc_inequality_all_k: inequalities.bc_all_k,
            bc_equality_all_k: bc_equality,
            bc_inequality_pointwise: inequalities.pointwise,
            bc_inequality_pointwise_strict_somewhere: !inequalities.pointwise_strict.is_empty(),
            lemma_direct,
            lemma_equality_agree: lemma_direct == bc_equality,
            e1_equals_einf: spectral.degenerates_at_e1(),
            spectral_consistent,
            euler_ok,
            symmetry_ok,
            duality_ok,
            sequences_ok: check_sequences(&hpq, &varouchas),
            structural_equalities_ok: check_structural_equalities(&varouchas),
            bc_aeppli_identity_ok,
            ek_recursion_ok: ek_recursion_check(&hpq, &varouchas),
            bc_surjectivity_ok: bc_surjectivity_from(&bc_to_dr, &varouchas.a, |k| betti[k as usize]),
        };

        let hodge = if opts.hodge {
            let owned;
            let g = match metric {
                Some(g) => g,
                None => {
                    owned = MetricData::identity(x);
                    &owned
                }
            };
            Some(hodge_summary(x, g)?)
        } else {
            None
        };

        Ok(CohomologyReport {
            p_max: x.p_max(),
            q_max: x.q_max(),
            n: x.n(),
            conjugation,
            hpq,
            hk,
            betti,
            euler_characteristic,
            varouchas,
            spectral,
            natural_maps,
            inequalities,
            hodge,
            verdicts,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.betti.len().saturating_sub(1)
    }
}
