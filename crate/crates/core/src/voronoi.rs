//! Perfect unary forms and the Voronoi graph on their homothety classes.
//!
//! A form `a` is perfect when the squares `x²`, `x ∈ M(a)`, span `K`. Its
//! Voronoi cone `V(a)` is generated by those squares; crossing a facet of
//! `V(a)` along the inward facet functional `c` leads to the adjacent
//! perfect form `a + t*·c`, where `t*` is the first parameter at which a new
//! vector attains the minimum.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cone::{self, Facet};
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::linalg::{self, Matrix};
use crate::minima::{self, MinimaRecord};
use crate::units::LogUnitLattice;
use crate::Q;

/// Outcome of a perfection test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectionCertificate {
    pub minima: MinimaRecord,
    pub rank: usize,
    /// Indices into `minima.vectors` whose squares are a basis of `K`
    /// (empty unless perfect).
    pub spanning_subset: Vec<usize>,
}

impl PerfectionCertificate {
    pub fn is_perfect(&self) -> bool {
        self.spanning_subset.len() == self.minima.vectors.first().map_or(0, FieldElement::degree)
    }
}

/// A facet of `V(a)` and where crossing it leads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetLink {
    /// Primitive integer normal `h` on square coordinates, `h·x² ≥ 0` on `V(a)`.
    pub normal: Vec<BigInt>,
    /// The element `c` with `Tr(c·y) = h·y`.
    pub functional: FieldElement,
    /// Indices into the class's minimal vectors whose squares lie on the facet.
    pub tight: Vec<usize>,
    /// Index of the adjacent class in the report, if resolved.
    pub neighbor: Option<usize>,
    /// The perfect form actually reached by the walk (content 1).
    pub neighbor_form: Option<FieldElement>,
    /// Whether walking back from `neighbor_form` returns to this class.
    pub involution: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectClass {
    pub key: String,
    /// Canonical representative: unit-reduced, integral, content 1.
    pub representative: FieldElement,
    pub minima: MinimaRecord,
    /// Coordinates of `x²` for `x` in `minima.vectors`.
    pub square_rays: Vec<FieldElement>,
    pub spanning_subset: Vec<usize>,
    pub facets: Vec<FacetLink>,
}

impl PerfectClass {
    /// `Nm(a)/μ(a)^n` and `|M(a)|`: invariant under scaling and unit
    /// equivalence.
    pub fn invariants(&self, field: &NumberField) -> (Q, usize) {
        class_invariants(field, &self.representative, &self.minima)
    }
}

fn class_invariants(field: &NumberField, a: &FieldElement, m: &MinimaRecord) -> (Q, usize) {
    let n = field.degree();
    (field.norm(a) / num_traits::pow(m.minimum.clone(), n), m.vectors.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_classes: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_classes: 1000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Sorted by key; `FacetLink::neighbor` indexes this list.
    pub classes: Vec<PerfectClass>,
    pub closure_complete: bool,
    pub forms_visited: usize,
    pub facets_crossed: usize,
    /// Walks that could not be completed, with the reason.
    pub anomalies: Vec<String>,
}

impl EnumerationReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Every crossed facet walked back to its class of origin.
    pub fn involution_holds(&self) -> bool {
        self.classes.iter().flat_map(|c| &c.facets).all(|f| f.involution != Some(false))
    }
}

pub fn square_rays(field: &NumberField, m: &MinimaRecord) -> Vec<FieldElement> {
    m.vectors.iter().map(|x| field.square(x)).collect()
}

/// Computes `M(a)` and the rank of the squares of its vectors.
pub fn is_perfect(field: &NumberField, a: &FieldElement) -> Result<PerfectionCertificate> {
    let minima = minima::minimum_and_vectors(field, a)?;
    let rays = square_rays(field, &minima);
    let n = field.degree();
    let mut chosen: Matrix = Vec::new();
    let mut subset = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(r.coords().to_vec());
        if linalg::rank(&trial) > chosen.len() {
            chosen = trial;
            subset.push(i);
            if chosen.len() == n {
                break;
            }
        }
    }
    let rank = subset.len();
    if rank < n {
        subset.clear();
    }
    Ok(PerfectionCertificate { minima, rank, spanning_subset: subset })
}

/// Walks from `a` (minimum `mu`) along `a + t·c` to the first `t* > 0`
/// where a vector outside `M(a)` with `Tr(c·y²) < 0` reaches the minimum,
/// and returns `a + t*·c`.
///
/// The minimum of `a + t·c` stays `mu` on the vectors where `Tr(c·x²) = 0`.
/// A parameter with smaller minimum is bracketed first (doubling, halving
/// whenever positivity is lost); then `t` is lowered to the smallest root
/// `(Tr(a·y²) − mu)/(−Tr(c·y²))` over the minimal vectors found, until the
/// minimum at `t` is `mu` again.
pub fn walk(field: &NumberField, a: &FieldElement, mu: &Q, c: &FieldElement) -> Result<FieldElement> {
    if field.is_totally_positive(c)? {
        return Err(Error::UnboundedDirection);
    }
    let at = |t: &Q| a + &c.scale(t);
    let two = Q::from_integer(2.into());
    let mut lo = Q::zero();
    let mut hi = Q::one();
    let mut bracket = None;
    for _ in 0..4096 {
        let g = minima::trace_gram(field, &at(&hi))?;
        if !g.positive_definite {
            hi = (&lo + &hi) / &two;
            continue;
        }
        let rec = minima::minima_of_gram(&g.entries)?;
        if rec.minimum < *mu {
            bracket = Some(rec);
            break;
        }
        lo = hi.clone();
        hi = &hi * &two;
    }
    let mut rec = bracket.ok_or(Error::UnboundedDirection)?;
    loop {
        let mut best: Option<Q> = None;
        for y in &rec.vectors {
            let y2 = field.square(y);
            let cy = field.trace(&field.mul(c, &y2));
            if cy.is_negative() {
                let t = (field.trace(&field.mul(a, &y2)) - mu) / -cy;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        let t = best.ok_or(Error::DegenerateDirection)?;
        if !t.is_positive() {
            return Err(Error::DegenerateDirection);
        }
        let form = at(&t);
        rec = minima::minimum_and_vectors(field, &form)?;
        if rec.minimum == *mu {
            return Ok(form);
        }
    }
}

fn functional_for(field: &NumberField, h: &[Q]) -> Result<FieldElement> {
    let c = linalg::solve(field.trace_matrix(), h).ok_or(Error::InvariantViolation("singular trace form".into()))?;
    Ok(FieldElement::new(c))
}

/// A perfect form reached from `1` by raising the rank of `M(a)` one walk at
/// a time. The result is integral with content 1.
pub fn initial_perfect_form(field: &NumberField) -> Result<FieldElement> {
    let n = field.degree();
    let mut a = field.one();
    loop {
        let cert = is_perfect(field, &a)?;
        if cert.is_perfect() {
            return Ok(a.primitive());
        }
        let rays: Matrix = square_rays(field, &cert.minima).iter().map(|r| r.coords().to_vec()).collect();
        let kernel = linalg::kernel(&rays, n);
        let h = kernel.first().ok_or(Error::DegenerateDirection)?;
        let mut c = functional_for(field, h)?;
        if field.is_totally_positive(&c)? {
            c = -&c;
        }
        a = walk(field, &a, &cert.minima.minimum, &c)?.primitive();
    }
}

/// Facets of `V(a)` with their functionals; no facets when `n = 1`.
pub fn compute_facets(field: &NumberField, rays: &[FieldElement]) -> Result<Vec<FacetLink>> {
    if field.degree() == 1 {
        return Ok(Vec::new());
    }
    let coords: Matrix = rays.iter().map(|r| r.coords().to_vec()).collect();
    cone::facets(&coords)?
        .into_iter()
        .map(|Facet { normal, tight }| {
            let h: Vec<Q> = normal.iter().cloned().map(Q::from_integer).collect();
            Ok(FacetLink {
                functional: functional_for(field, &h)?,
                normal,
                tight,
                neighbor: None,
                neighbor_form: None,
                involution: None,
            })
        })
        .collect()
}

/// The perfect form across `facet` from the perfect form `a`, content 1.
pub fn neighbor(field: &NumberField, a: &FieldElement, mu: &Q, facet: &FacetLink) -> Result<FieldElement> {
    let next = walk(field, a, mu, &facet.functional)?.primitive();
    let before = minima::minimum_and_vectors(field, a)?;
    let g = minima::trace_gram(field, &next)?;
    let after = minima::minima_of_gram(&g.entries)?;
    for &i in &facet.tight {
        if g.value(before.vectors[i].coords()) != after.minimum {
            return Err(Error::InvariantViolation("facet vector lost minimality".into()));
        }
    }
    Ok(next)
}

/// Deterministic key for the homothety class of a perfect form:
/// unit-reduce, clear content, then take the translate `a·u²` of smallest
/// `(trace, coordinates)` over the exponent box of radius 2.
pub fn canonical_form(field: &NumberField, lattice: &LogUnitLattice, a: &FieldElement) -> Result<FieldElement> {
    let (reduced, _) = lattice.reduce_by_units(field, a)?;
    let base = reduced.primitive();
    let d = lattice.rank();
    let squares: Vec<FieldElement> = lattice.units().iter().map(|u| field.square(u)).collect();
    let mut best = (field.trace(&base), base.clone());
    let mut exps = alloc::vec![-2i64; d];
    if d == 0 {
        return Ok(base);
    }
    loop {
        let mut cand = base.clone();
        for (s, &e) in squares.iter().zip(&exps) {
            if e != 0 {
                cand = field.mul(&cand, &field.pow(s, e)?);
            }
        }
        let cand = cand.primitive();
        let tr = field.trace(&cand);
        if tr < best.0 || (tr == best.0 && cand < best.1) {
            best = (tr, cand);
        }
        // odometer over {−2, …, 2}^d
        let mut k = 0;
        while k < d && exps[k] == 2 {
            exps[k] = -2;
            k += 1;
        }
        if k == d {
            break;
        }
        exps[k] += 1;
    }
    Ok(best.1)
}

pub fn key_of(form: &FieldElement) -> String {
    let parts: Vec<String> = form.coords().iter().map(|c| format!("{c}")).collect();
    parts.join(",")
}

pub fn canonical_key(field: &NumberField, lattice: &LogUnitLattice, a: &FieldElement) -> Result<String> {
    Ok(key_of(&canonical_form(field, lattice, a)?))
}

impl PerfectClass {
    /// Builds the class of the perfect form `a` (any representative).
    pub fn new(field: &NumberField, lattice: &LogUnitLattice, a: &FieldElement) -> Result<Self> {
        let representative = canonical_form(field, lattice, a)?;
        let cert = is_perfect(field, &representative)?;
        if !cert.is_perfect() {
            return Err(Error::InvariantViolation(format!("form {} is not perfect", key_of(a))));
        }
        let rays = square_rays(field, &cert.minima);
        let facets = compute_facets(field, &rays)?;
        Ok(PerfectClass {
            key: key_of(&representative),
            representative,
            minima: cert.minima,
            square_rays: rays,
            spanning_subset: cert.spanning_subset,
            facets,
        })
    }
}

/// The facet of `V(b)` containing the given squares.
fn facet_containing(field: &NumberField, b: &FieldElement, squares: &[FieldElement]) -> Result<(Q, FacetLink)> {
    let cert = is_perfect(field, b)?;
    let rays = square_rays(field, &cert.minima);
    let facets = compute_facets(field, &rays)?;
    let mu = cert.minima.minimum;
    facets
        .into_iter()
        .find(|f| {
            let h: Vec<Q> = f.normal.iter().cloned().map(Q::from_integer).collect();
            squares.iter().all(|s| linalg::dot(&h, s.coords()).is_zero())
        })
        .map(|f| (mu, f))
        .ok_or(Error::InvariantViolation("shared facet not found".into()))
}

/// Walks back across the facet shared with `from` and tests whether the
/// result is equivalent to `from`.
pub fn involution_check(
    field: &NumberField,
    lattice: &LogUnitLattice,
    from: &PerfectClass,
    facet: &FacetLink,
    reached: &FieldElement,
) -> Result<bool> {
    let shared: Vec<FieldElement> = facet.tight.iter().map(|&i| from.square_rays[i].clone()).collect();
    let (mu, back) = facet_containing(field, reached, &shared)?;
    let home = walk(field, reached, &mu, &back.functional)?;
    Ok(lattice.unit_equivalence_witness(field, &from.representative, &home)?.is_some())
}

struct Registry {
    classes: Vec<PerfectClass>,
    by_key: BTreeMap<String, usize>,
    by_invariant: BTreeMap<(Q, usize), Vec<usize>>,
}

impl Registry {
    fn find(
        &self,
        field: &NumberField,
        lattice: &LogUnitLattice,
        key: &str,
        form: &FieldElement,
    ) -> Result<Option<usize>> {
        if let Some(&i) = self.by_key.get(key) {
            return Ok(Some(i));
        }
        let m = minima::minimum_and_vectors(field, form)?;
        if let Some(cands) = self.by_invariant.get(&class_invariants(field, form, &m)) {
            for &i in cands {
                if lattice.unit_equivalence_witness(field, &self.classes[i].representative, form)?.is_some() {
                    return Ok(Some(i));
                }
            }
        }
        Ok(None)
    }

    fn insert(&mut self, field: &NumberField, class: PerfectClass) -> usize {
        let i = self.classes.len();
        self.by_key.insert(class.key.clone(), i);
        self.by_invariant.entry(class.invariants(field)).or_default().push(i);
        self.classes.push(class);
        i
    }
}

/// Breadth-first search of the Voronoi graph modulo units and scaling,
/// starting from [`initial_perfect_form`].
pub fn enumerate_perfect_classes(
    field: &NumberField,
    lattice: &LogUnitLattice,
    limits: EnumerationLimits,
) -> Result<EnumerationReport> {
    enumerate_perfect_classes_until(field, lattice, limits, &mut || false)
}

/// As [`enumerate_perfect_classes`], but `stop` is polled before each class
/// is expanded; a `true` answer ends the search with an open closure.
pub fn enumerate_perfect_classes_until(
    field: &NumberField,
    lattice: &LogUnitLattice,
    limits: EnumerationLimits,
    stop: &mut dyn FnMut() -> bool,
) -> Result<EnumerationReport> {
    let seed = PerfectClass::new(field, lattice, &initial_perfect_form(field)?)?;
    let mut reg = Registry { classes: Vec::new(), by_key: BTreeMap::new(), by_invariant: BTreeMap::new() };
    let mut report = EnumerationReport { closure_complete: true, forms_visited: 1, ..Default::default() };
    let mut queue = VecDeque::from([reg.insert(field, seed)]);
    let mut limit_hit = false;
    while let Some(i) = queue.pop_front() {
        if stop() {
            report.closure_complete = false;
            report.anomalies.push("search stopped before the frontier was empty".into());
            break;
        }
        for f in 0..reg.classes[i].facets.len() {
            let class = &reg.classes[i];
            let facet = &class.facets[f];
            report.facets_crossed += 1;
            let next = match neighbor(field, &class.representative, &class.minima.minimum, facet) {
                Ok(next) => next,
                Err(e) => {
                    report.anomalies.push(format!("class {} facet {}: {}", class.key, f, e));
                    report.closure_complete = false;
                    continue;
                }
            };
            report.forms_visited += 1;
            let involution = involution_check(field, lattice, class, facet, &next)?;
            let key = canonical_key(field, lattice, &next)?;
            let target = match reg.find(field, lattice, &key, &next)? {
                Some(j) => Some(j),
                None if reg.classes.len() < limits.max_classes => {
                    let j = reg.insert(field, PerfectClass::new(field, lattice, &next)?);
                    queue.push_back(j);
                    Some(j)
                }
                None => {
                    if !limit_hit {
                        limit_hit = true;
                        report.anomalies.push(format!("class limit {} reached, closure left open", limits.max_classes));
                    }
                    report.closure_complete = false;
                    None
                }
            };
            let link = &mut reg.classes[i].facets[f];
            link.neighbor = target;
            link.neighbor_form = Some(next);
            link.involution = Some(involution);
        }
    }
    // order by key and renumber the links
    let mut order: Vec<usize> = (0..reg.classes.len()).collect();
    order.sort_by(|&x, &y| reg.classes[x].key.cmp(&reg.classes[y].key));
    let mut position = alloc::vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut slots: Vec<Option<PerfectClass>> = reg.classes.into_iter().map(Some).collect();
    report.classes = order
        .iter()
        .map(|&old| {
            let mut c = slots[old].take().expect("each class moved once");
            for f in &mut c.facets {
                f.neighbor = f.neighbor.map(|j| position[j]);
            }
            c
        })
        .collect();
    Ok(report)
}

/// Result of comparing Voronoi cones pairwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessOutcome {
    pub cones: usize,
    pub pairs_checked: usize,
    pub violations: Vec<(usize, usize)>,
}

impl DisjointnessOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every ordered pair of distinct cones `V(a)`, `V(b)` among the given
/// perfect forms (scalar multiples identified), tests by exact linear
/// programming whether the barycenter of the rays of `V(a)` is a strictly
/// positive combination of the rays of `V(b)`. Each LP answer is
/// cross-checked against the facet description of `V(b)`.
pub fn cones_disjoint(field: &NumberField, forms: &[FieldElement]) -> Result<DisjointnessOutcome> {
    let mut distinct: Vec<FieldElement> = Vec::new();
    for f in forms {
        let p = f.primitive();
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let mut rays: Vec<Matrix> = Vec::new();
    let mut facets: Vec<Vec<Facet>> = Vec::new();
    for a in &distinct {
        let m = minima::minimum_and_vectors(field, a)?;
        let r: Matrix = square_rays(field, &m).iter().map(|x| x.coords().to_vec()).collect();
        facets.push(if field.degree() == 1 { Vec::new() } else { cone::facets(&r)? });
        rays.push(r);
    }
    let mut out = DisjointnessOutcome { cones: distinct.len(), pairs_checked: 0, violations: Vec::new() };
    for i in 0..distinct.len() {
        let n = field.degree();
        let bary: Vec<Q> = (0..n).map(|k| rays[i].iter().map(|r| &r[k]).sum()).collect();
        for j in 0..distinct.len() {
            if i == j {
                continue;
            }
            out.pairs_checked += 1;
            let by_lp = cone::strictly_positive_combination(&rays[j], &bary);
            if n > 1 && by_lp != cone::strictly_inside_by_facets(&facets[j], &bary) {
                return Err(Error::InvariantViolation("LP and facet membership disagree".into()));
            }
            if by_lp {
                out.violations.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Pairwise disjointness over the representatives of `classes` and every
/// neighbouring form reached from them.
pub fn interior_disjointness_check(field: &NumberField, classes: &[PerfectClass]) -> Result<DisjointnessOutcome> {
    let mut forms: Vec<FieldElement> = classes.iter().map(|c| c.representative.clone()).collect();
    for c in classes {
        forms.extend(c.facets.iter().filter_map(|f| f.neighbor_form.clone()));
    }
    cones_disjoint(field, &forms)
}

/// `|det|` of the squares of the spanning subset over the integral basis.
pub fn certificate_determinant(class: &PerfectClass) -> BigInt {
    let m: Matrix = class.spanning_subset.iter().map(|&i| class.square_rays[i].coords().to_vec()).collect();
    linalg::determinant(&m).abs().to_integer()
}

/// Scales `a` so that `μ = 1`.
pub fn mu_normalized(class: &PerfectClass) -> FieldElement {
    class.representative.scale(&class.minima.minimum.recip())
}
