//! Finite direct products: the tuple group, the product topo-system, the meet/join
//! identities for product subgroups, and a replayable compactness certificate.
//!
//! Index sets are finite here, so the usual requirement that almost all components of
//! a product topen be the whole factor is vacuous: every tuple of factor topens counts.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bits::{ElementId, ElementSet};
use crate::filters::{pushforward_family, FilterError, Pushforward, SubgroupFilter};
use crate::group::{direct_product_table, FiniteGroup, GroupDescriptor, GroupError, Homomorphism, DEFAULT_ORDER_CAP};
use crate::lattice::SubgroupLattice;
use crate::toposys::{is_topomorphism, Continuity, ToposysError, TopoDescriptor, TopoSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Toposys(#[from] ToposysError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("a product needs at least one factor")]
    NoFactors,
    #[error("{0} is not a product of subgroups of the factors")]
    NotProductForm(ElementSet),
    #[error("factor systems do not match the product's factors")]
    FactorMismatch,
    #[error("certificate failed at {step}: {witness}")]
    CertificateFailure { step: String, witness: String },
}

/// `G_0 × … × G_{k-1}` with element `(g_0, …, g_{k-1})` encoded in mixed radix, factor 0
/// most significant.
#[derive(Clone, Debug)]
pub struct ProductGroup {
    factors: Vec<Arc<FiniteGroup>>,
    group: Arc<FiniteGroup>,
    projections: Vec<Homomorphism>,
    embeddings: Vec<Homomorphism>,
    strides: Vec<usize>,
}

pub fn direct_product(factors: Vec<Arc<FiniteGroup>>, cap: usize) -> Result<ProductGroup, ProductError> {
    if factors.is_empty() {
        return Err(ProductError::NoFactors);
    }
    let cap = cap.min(crate::bits::MAX_ORDER);
    let order = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.order())).unwrap_or(usize::MAX);
    if order > cap {
        return Err(GroupError::OrderCapExceeded { order, cap }.into());
    }
    let refs: Vec<&FiniteGroup> = factors.iter().map(|f| f.as_ref()).collect();
    let (table, labels) = direct_product_table(&refs);
    let descriptor = GroupDescriptor::Product(factors.iter().map(|f| f.descriptor().clone()).collect());
    let group = Arc::new(FiniteGroup::from_flat(descriptor, order, table, labels));

    let mut strides = vec![1; factors.len()];
    for i in (0..factors.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * factors[i + 1].order();
    }
    let mut projections = Vec::with_capacity(factors.len());
    let mut embeddings = Vec::with_capacity(factors.len());
    for (i, f) in factors.iter().enumerate() {
        let pi = (0..order).map(|x| x / strides[i] % f.order()).collect();
        projections.push(Homomorphism::new(group.clone(), f.clone(), pi)?);
        let emb = (0..f.order()).map(|x| x * strides[i]).collect();
        embeddings.push(Homomorphism::new(f.clone(), group.clone(), emb)?);
    }
    Ok(ProductGroup { factors, group, projections, embeddings, strides })
}

impl ProductGroup {
    pub fn factors(&self) -> &[Arc<FiniteGroup>] {
        &self.factors
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn projections(&self) -> &[Homomorphism] {
        &self.projections
    }

    pub fn embeddings(&self) -> &[Homomorphism] {
        &self.embeddings
    }

    pub fn encode(&self, coords: &[ElementId]) -> ElementId {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn decode(&self, x: ElementId) -> Vec<ElementId> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }

    /// `∏ A_i` as a set of encoded elements.
    pub fn product_set(&self, parts: &[ElementSet]) -> ElementSet {
        assert_eq!(parts.len(), self.factors.len());
        let mut out = ElementSet::singleton(0);
        for (part, &stride) in parts.iter().zip(&self.strides) {
            out = out
                .iter()
                .flat_map(|x| part.iter().map(move |a| x + a * stride))
                .collect();
        }
        out
    }

    /// `(π_i(A))_i` when `A` is their product.
    pub fn decompose(&self, set: ElementSet) -> Result<Vec<ElementSet>, ProductError> {
        let parts: Vec<ElementSet> = self.projections.iter().map(|p| p.image(set)).collect();
        if self.product_set(&parts) == set {
            Ok(parts)
        } else {
            Err(ProductError::NotProductForm(set))
        }
    }
}

/// Cartesian product of index lists, last coordinate fastest.
fn tuples(lists: &[Vec<usize>]) -> Vec<Vec<usize>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |&i| {
                    let mut t = prefix.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

#[derive(Clone, Debug)]
pub struct ProductToposys {
    pub product: Arc<ProductGroup>,
    pub system: TopoSystem,
    pub factors: Vec<TopoSystem>,
}

/// `{∏ A_i : A_i ∈ T_i}` on the product lattice; the axioms are re-verified.
pub fn product_toposys(
    product: Arc<ProductGroup>,
    lattice: Arc<SubgroupLattice>,
    factors: Vec<TopoSystem>,
) -> Result<ProductToposys, ProductError> {
    if factors.len() != product.factors.len()
        || lattice.group() != product.group()
        || factors.iter().zip(&product.factors).any(|(t, g)| t.lattice().group() != g)
    {
        return Err(ProductError::FactorMismatch);
    }
    let topens: Vec<Vec<usize>> = factors.iter().map(|t| t.topens()).collect();
    let mut members = FixedBitSet::with_capacity(lattice.len());
    for combo in tuples(&topens) {
        let parts: Vec<ElementSet> = combo.iter().zip(&factors).map(|(&a, t)| t.lattice().members(a)).collect();
        members.insert(lattice.index_of_subgroup(product.product_set(&parts)));
    }
    let names: Vec<String> = factors.iter().map(|t| t.descriptor().to_string()).collect();
    let descriptor = TopoDescriptor::Derived(format!("product({})", names.join(",")));
    let system = TopoSystem::from_members(lattice, members, descriptor)?;
    Ok(ProductToposys { product, system, factors })
}

/// Builds the product group and lattice from factor systems.
pub fn product_of_systems(factors: Vec<TopoSystem>) -> Result<ProductToposys, ProductError> {
    let groups = factors.iter().map(|t| t.lattice().group().clone()).collect();
    let product = Arc::new(direct_product(groups, DEFAULT_ORDER_CAP)?);
    let lattice = Arc::new(SubgroupLattice::enumerate(product.group().clone()));
    product_toposys(product, lattice, factors)
}

impl ProductToposys {
    /// Whether each projection is continuous onto its factor system.
    pub fn projections_continuous(&self) -> Result<bool, ProductError> {
        for (p, t) in self.product.projections.iter().zip(&self.factors) {
            if is_topomorphism(p, &self.system, t)? != Continuity::Continuous {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    /// `"meet"` or `"join"`.
    pub identity: &'static str,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub lhs: ElementSet,
    pub rhs: ElementSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub pairs_checked: usize,
    pub failure: Option<IdentityFailure>,
}

/// `(∏A_i) ∩ (∏B_i) = ∏(A_i ∩ B_i)` and `⟨∏A_i, ∏B_i⟩ = ∏⟨A_i, B_i⟩` over every pair
/// of tuples of factor subgroups. The left sides are computed in the product lattice,
/// the right sides in the factor lattices.
pub fn product_identities_check(
    product: &ProductGroup,
    lattice: &SubgroupLattice,
    factor_lattices: &[Arc<SubgroupLattice>],
) -> Result<IdentityReport, ProductError> {
    if factor_lattices.len() != product.factors.len()
        || factor_lattices.iter().zip(&product.factors).any(|(l, g)| l.group() != g)
    {
        return Err(ProductError::FactorMismatch);
    }
    let all: Vec<Vec<usize>> = factor_lattices.iter().map(|l| (0..l.len()).collect()).collect();
    let combos = tuples(&all);
    let prod = |t: &[usize]| {
        let parts: Vec<ElementSet> = t.iter().zip(factor_lattices).map(|(&a, l)| l.members(a)).collect();
        product.product_set(&parts)
    };
    let index: Vec<usize> = combos.iter().map(|t| lattice.index_of_subgroup(prod(t))).collect();
    let mut pairs_checked = 0;
    for (i, a) in combos.iter().enumerate() {
        for (j, b) in combos.iter().enumerate().skip(i) {
            pairs_checked += 1;
            let meets: Vec<usize> = (0..a.len()).map(|k| factor_lattices[k].meet(a[k], b[k])).collect();
            let joins: Vec<usize> = (0..a.len()).map(|k| factor_lattices[k].join(a[k], b[k])).collect();
            for (identity, lhs, rhs) in [
                ("meet", lattice.members(lattice.meet(index[i], index[j])), prod(&meets)),
                ("join", lattice.members(lattice.join(index[i], index[j])), prod(&joins)),
            ] {
                if lhs != rhs {
                    let failure = IdentityFailure { identity, a: a.clone(), b: b.clone(), lhs, rhs };
                    return Ok(IdentityReport { pairs_checked, failure: Some(failure) });
                }
            }
        }
    }
    Ok(IdentityReport { pairs_checked, failure: None })
}

/// What happened to the filter in one factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorPushforward {
    /// `(π_i)_*(F)` is an ultrafilter on the factor.
    Ultrafilter { members: Vec<usize> },
    /// `ker π_i ∈ F`: the pushforward contains every subgroup of the factor, the trivial
    /// one included, so it converges to every point. `literal_ultrafilter` records
    /// whether its non-trivial part happens to be an ultrafilter anyway.
    Degenerate { kernel: usize, literal_ultrafilter: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorStep {
    pub factor: usize,
    pub pushforward: FactorPushforward,
    pub convergence_set: ElementSet,
    /// Least element of the convergence set.
    pub limit: ElementId,
}

/// One product topen containing the assembled point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub topen: usize,
    /// `A_i = π_i(A)`, as factor lattice indices.
    pub components: Vec<usize>,
    /// `π_i^{-1}(A_i)`, as product lattice indices; each is a member of the filter.
    pub preimages: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TychonoffCertificate {
    pub point: ElementId,
    pub coordinates: Vec<ElementId>,
    pub factors: Vec<FactorStep>,
    pub replay: Vec<ReplayStep>,
}

impl TychonoffCertificate {
    pub fn degenerate_factors(&self) -> usize {
        self.factors
            .iter()
            .filter(|s| matches!(s.pushforward, FactorPushforward::Degenerate { .. }))
            .count()
    }
}

fn failure(step: impl Into<String>, witness: impl Into<String>) -> ProductError {
    ProductError::CertificateFailure { step: step.into(), witness: witness.into() }
}

/// Pushes the ultrafilter to every factor, picks the least limit `x_i` in each, and
/// replays the argument that `F → (x_i)`: each product topen `A ∋ x` splits as `∏A_i`,
/// every `π_i^{-1}(A_i)` is a member, and `A = ∩ π_i^{-1}(A_i)` is then a member too.
pub fn tychonoff_certificate(p: &ProductToposys, f: &SubgroupFilter) -> Result<TychonoffCertificate, ProductError> {
    let lattice = p.system.lattice();
    if f.lattice().group() != lattice.group() {
        return Err(ProductError::FactorMismatch);
    }
    if let Err(c) = f.is_ultrafilter() {
        return Err(failure("precondition", format!("filter is not ultra: #{c} is a union of non-members")));
    }

    let mut steps = Vec::with_capacity(p.factors.len());
    for (i, (pi, t)) in p.product.projections.iter().zip(&p.factors).enumerate() {
        let pf = pushforward_family(pi, f, t.lattice())?;
        let pushforward = match &pf {
            Pushforward::Filter(g) => {
                if let Err(c) = g.is_ultrafilter() {
                    return Err(failure(format!("factor {i} pushforward"), format!("not ultra at #{c}")));
                }
                FactorPushforward::Ultrafilter { members: g.indices() }
            }
            Pushforward::Improper { kernel, .. } => {
                let literal_ultrafilter = crate::filters::pushforward(pi, f, t.lattice())
                    .map(|g| g.is_ultrafilter().is_ok())
                    .unwrap_or(false);
                FactorPushforward::Degenerate { kernel: *kernel, literal_ultrafilter }
            }
        };
        let convergence_set = pf.convergence_set(t).points;
        let limit = convergence_set
            .first()
            .ok_or_else(|| failure(format!("factor {i} convergence"), "pushforward has no limit"))?;
        steps.push(FactorStep { factor: i, pushforward, convergence_set, limit });
    }

    let coordinates: Vec<ElementId> = steps.iter().map(|s| s.limit).collect();
    let point = p.product.encode(&coordinates);
    let mut replay = Vec::new();
    for a in p.system.topens_containing(point) {
        let set = lattice.members(a);
        let parts = p.product.decompose(set).map_err(|_| failure(format!("decompose #{a}"), set.to_string()))?;
        let mut components = Vec::with_capacity(parts.len());
        let mut preimages = Vec::with_capacity(parts.len());
        let mut meet = p.product.group().elements();
        for (i, part) in parts.iter().enumerate() {
            let fl = p.factors[i].lattice();
            components.push(fl.index_of_subgroup(*part));
            let pre = p.product.projections[i].preimage(*part);
            let idx = lattice.index_of_subgroup(pre);
            if !f.contains(idx) {
                return Err(failure(format!("topen #{a}, factor {i}"), format!("preimage #{idx} not in filter")));
            }
            preimages.push(idx);
            meet = meet.intersection(pre);
        }
        if meet != set {
            return Err(failure(format!("topen #{a}"), format!("intersection of preimages is {meet}")));
        }
        if !f.contains(a) {
            return Err(failure(format!("topen #{a}"), "not in filter"));
        }
        replay.push(ReplayStep { topen: a, components, preimages });
    }
    Ok(TychonoffCertificate { point, coordinates, factors: steps, replay })
}
