//! Constructive checks of the two convergence characterisations on one `(G, T)` cell.

use std::sync::Arc;

use serde::Serialize;

use super::{enumerate_ultrafilters, pushforward_family, FilterError};
use crate::bits::ElementId;
use crate::group::Homomorphism;
use crate::lattice::SubgroupLattice;
use crate::toposys::{build_toposys, is_topomorphism, Continuity, TopoDescriptor, TopoSystem};

/// Quotient maps beyond this many normal subgroups are not tried.
const MAX_QUOTIENT_MAPS: usize = 12;

/// A homomorphism out of `G` together with its target lattice.
#[derive(Clone, Debug)]
pub struct MapTarget {
    pub label: String,
    pub map: Homomorphism,
    pub lattice: Arc<SubgroupLattice>,
    quotient_by: Option<usize>,
}

/// The identity of `G` and the quotient maps `G → G/N` for the first normal `N ≠ 1`.
pub fn standard_maps(lattice: &Arc<SubgroupLattice>) -> Vec<MapTarget> {
    let g = lattice.group();
    let mut out = vec![MapTarget {
        label: "id".into(),
        map: Homomorphism::identity(g.clone()),
        lattice: lattice.clone(),
        quotient_by: None,
    }];
    for n in (1..lattice.len()).filter(|&n| lattice.is_normal(n)).take(MAX_QUOTIENT_MAPS) {
        let (q, map) = g.quotient(lattice.members(n)).expect("normal");
        out.push(MapTarget {
            label: format!("q#{n}"),
            map,
            lattice: Arc::new(SubgroupLattice::enumerate(q)),
            quotient_by: Some(n),
        });
    }
    out
}

/// Ultrafilter `F_generator` converging to both `x` and `y`, which are cyclically distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiLimit {
    pub generator: ElementId,
    pub x: ElementId,
    pub y: ElementId,
}

/// `F_generator → x` but the pushforward along `map` does not converge to `f(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuityFailure {
    pub map: String,
    pub generator: ElementId,
    pub x: ElementId,
    pub image: ElementId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub ultrafilters: usize,
    /// Generator of an ultrafilter with no limit, if any.
    pub non_convergent: Option<ElementId>,
    pub hausdorff: bool,
    /// One entry per ultrafilter with two cyclically distinct limits.
    pub multi_limits: Vec<MultiLimit>,
    pub hausdorff_equivalence: bool,
    /// Continuous candidate maps, as `label:target-system`.
    pub continuous_maps: Vec<String>,
    pub continuity_checks: usize,
    /// Pushforwards where the kernel was a member, so every point is a limit.
    pub improper_pushforwards: usize,
    pub continuity_failure: Option<ContinuityFailure>,
    /// The identity is never a limit: `1` is topen and never a filter member.
    pub identity_never_limit: bool,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.non_convergent.is_none()
            && self.hausdorff_equivalence
            && self.continuity_failure.is_none()
            && self.identity_never_limit
    }
}

fn candidate_targets(t: &TopoSystem, m: &MapTarget) -> Vec<(String, TopoSystem)> {
    let mut out = Vec::new();
    match m.quotient_by {
        None => out.push((t.descriptor().to_string(), t.clone())),
        Some(n) => {
            if let Some(s) = t.quotient_toposys(n).ok().and_then(|p| p.system()) {
                out.push(("quotient".to_string(), s));
            }
        }
    }
    for d in [TopoDescriptor::Trivial, TopoDescriptor::Discrete] {
        if let Ok(s) = build_toposys(&m.lattice, &d) {
            out.push((d.to_string(), s));
        }
    }
    out
}

/// (i) every ultrafilter has a limit; (ii) `T` is Hausdorff iff no ultrafilter has two
/// cyclically distinct limits; (iii) along every continuous candidate map `f`,
/// `F → x` implies `f_*(F) → f(x)`.
pub fn theorem_checks(t: &TopoSystem, maps: &[MapTarget]) -> Result<TheoremReport, FilterError> {
    let lattice = t.lattice();
    let ultra = enumerate_ultrafilters(lattice)?;
    let hausdorff = t.is_hausdorff().hausdorff;

    let mut non_convergent = None;
    let mut multi_limits = Vec::new();
    let mut identity_never_limit = true;
    let mut limits = Vec::with_capacity(ultra.len());
    for f in &ultra {
        let generator = f.principal_generator().expect("ultrafilters are principal");
        let set = f.convergence_set(t)?;
        if set.points.is_empty() && non_convergent.is_none() {
            non_convergent = Some(generator);
        }
        if set.points.contains(0) {
            identity_never_limit = false;
        }
        if let Some((x, y)) = set.cyclically_distinct_pair(lattice) {
            multi_limits.push(MultiLimit { generator, x, y });
        }
        limits.push((generator, set.points));
    }

    let mut continuous_maps = Vec::new();
    let mut continuity_checks = 0;
    let mut improper_pushforwards = 0;
    let mut continuity_failure = None;
    for m in maps {
        for (name, target) in candidate_targets(t, m) {
            if is_topomorphism(&m.map, t, &target).ok() != Some(Continuity::Continuous) {
                continue;
            }
            let label = format!("{}:{name}", m.label);
            for (f, (generator, points)) in ultra.iter().zip(&limits) {
                let pf = pushforward_family(&m.map, f, &m.lattice)?;
                if pf.is_improper() {
                    improper_pushforwards += 1;
                }
                for x in points.iter() {
                    continuity_checks += 1;
                    let image = m.map.apply(x);
                    if !pf.converges_to(&target, image).converges && continuity_failure.is_none() {
                        continuity_failure =
                            Some(ContinuityFailure { map: label.clone(), generator: *generator, x, image });
                    }
                }
            }
            continuous_maps.push(label);
        }
    }

    Ok(TheoremReport {
        ultrafilters: ultra.len(),
        non_convergent,
        hausdorff,
        hausdorff_equivalence: hausdorff == multi_limits.is_empty(),
        multi_limits,
        continuous_maps,
        continuity_checks,
        improper_pushforwards,
        continuity_failure,
        identity_never_limit,
    })
}
