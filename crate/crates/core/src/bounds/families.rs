//! Hard instance families for the lower-bound constructions.
//!
//! Static star (gap `Δ`): `P_1` has arm 1 at `Δ` and all others at 0; for
//! `i ≥ 2`, `P_i` additionally puts `2Δ` on arm `i`. Under `P_i` arm `i` is the
//! unique best arm and every other pull costs at least `Δ`.
//!
//! Adaptive (horizon `T`, `M` batches):
//! `T_j = ⌊T^{(1−2^{−j})/(1−2^{−M})}⌋`,
//! `Δ_j = (√K/(36M)) · T^{−(1−2^{1−j})/(2(1−2^{−M}))}`;
//! `P_{j,k}` puts `Δ_j + Δ_M` on arm `k < K` and `Δ_M` on arm `K`,
//! `P_M` puts `Δ_M` on arm `K` alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::snapped_floor;
use crate::instance::BanditInstance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    StaticStar { delta: f64 },
    Adaptive { batches: usize, horizon: u64 },
}

/// Which member of a family an instance is. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MemberKind {
    StaticStar { i: usize },
    AdaptiveJk { j: usize, k: usize },
    AdaptiveM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub kind: MemberKind,
    pub instance: BanditInstance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceFamily {
    pub kind: FamilyKind,
    pub arms: usize,
    pub members: Vec<FamilyMember>,
    /// `T_1, …, T_M` (adaptive only).
    pub times: Vec<u64>,
    /// `Δ_1, …, Δ_M` (adaptive) or the single gap `Δ` (static star).
    pub deltas: Vec<f64>,
}

impl HardInstanceFamily {
    pub fn instances(&self) -> impl Iterator<Item = &BanditInstance> {
        self.members.iter().map(|m| &m.instance)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn make_static_star_family(arms: usize, delta: f64) -> Result<HardInstanceFamily> {
    if arms < 2 {
        return Err(Error::Domain(format!("need K ≥ 2, got {arms}")));
    }
    if !(delta > 0.0 && 2.0 * delta <= (arms as f64).sqrt()) {
        return Err(Error::Domain(format!(
            "static star needs 0 < 2Δ ≤ √K, got Δ = {delta} with K = {arms}"
        )));
    }
    let members = (0..arms)
        .map(|i| {
            let mut means = vec![0.0; arms];
            means[0] = delta;
            if i > 0 {
                means[i] = 2.0 * delta;
            }
            Ok(FamilyMember {
                kind: MemberKind::StaticStar { i: i + 1 },
                instance: BanditInstance::new(means)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(HardInstanceFamily {
        kind: FamilyKind::StaticStar { delta },
        arms,
        members,
        times: Vec::new(),
        deltas: vec![delta],
    })
}

pub fn make_adaptive_family(arms: usize, batches: usize, horizon: u64) -> Result<HardInstanceFamily> {
    if arms < 2 || batches < 1 || horizon < 1 {
        return Err(Error::Domain(format!(
            "need K ≥ 2, M ≥ 1, T ≥ 1 (K = {arms}, M = {batches}, T = {horizon})"
        )));
    }
    let t = horizon as f64;
    let m = batches as i32;
    let denom = 1.0 - 2f64.powi(-m);
    let scale = (arms as f64).sqrt() / (36.0 * batches as f64);
    let mut times: Vec<u64> = (1..=m)
        .map(|j| snapped_floor(t.powf((1.0 - 2f64.powi(-j)) / denom)))
        .collect();
    times[batches - 1] = horizon;
    let deltas: Vec<f64> = (1..=m)
        .map(|j| scale * t.powf(-(1.0 - 2f64.powi(1 - j)) / (2.0 * denom)))
        .collect();

    let last = deltas[batches - 1];
    let mut members = Vec::with_capacity((batches - 1) * (arms - 1) + 1);
    for j in 1..batches {
        for k in 1..arms {
            let mut means = vec![0.0; arms];
            means[k - 1] = deltas[j - 1] + last;
            means[arms - 1] = last;
            members.push(FamilyMember {
                kind: MemberKind::AdaptiveJk { j, k },
                instance: BanditInstance::new(means)?,
            });
        }
    }
    let mut means = vec![0.0; arms];
    means[arms - 1] = last;
    members.push(FamilyMember {
        kind: MemberKind::AdaptiveM,
        instance: BanditInstance::new(means)?,
    });
    Ok(HardInstanceFamily {
        kind: FamilyKind::Adaptive { batches, horizon },
        arms,
        members,
        times,
        deltas,
    })
}
