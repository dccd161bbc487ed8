//! Permutation groups via a base and strong generating set.
//!
//! Construction runs the deterministic Schreier–Sims algorithm, taking new
//! base points in natural order (the least point moved by the sifted
//! residue). Groups are immutable once built; extension with a new
//! generator produces a fresh value.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default bound on group order for operations that enumerate every element.
pub const ENUMERATION_BOUND: u64 = 1_000_000;
/// Default bound for full structure fingerprints.
pub const FINGERPRINT_BOUND: u64 = 10_000;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    // reps[p] maps the base point to p.
    reps: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Level {
        let mut level = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            reps: Vec::new(),
        };
        level.recompute(degree);
        level
    }

    fn recompute(&mut self, degree: usize) {
        let mut reps: Vec<Option<Permutation>> = vec![None; degree];
        reps[self.point] = Some(Permutation::identity(degree));
        let mut orbit = vec![self.point];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            k += 1;
            for s in &self.gens {
                let q = s.apply(p);
                if reps[q].is_none() {
                    let u = reps[p].as_ref().expect("orbit point has a rep").then(s);
                    reps[q] = Some(u);
                    orbit.push(q);
                }
            }
        }
        self.orbit = orbit;
        self.reps = reps;
    }
}

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    /// Trivial group of the given degree.
    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        }
    }

    pub fn from_generators(gens: &[Permutation]) -> Result<PermGroup> {
        let first = gens.first().ok_or(Error::NoGenerators)?;
        PermGroup::with_base_prefix(first.degree(), gens, &[])
    }

    /// Builds the group whose base starts with `prefix`.
    pub fn with_base_prefix(
        degree: usize,
        gens: &[Permutation],
        prefix: &[usize],
    ) -> Result<PermGroup> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut group = PermGroup::trivial(degree);
        group.generators = gens.to_vec();
        for &p in prefix {
            if p >= degree {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree,
                });
            }
            group.levels.push(Level::new(p, degree));
        }
        let strong: Vec<Permutation> = dedup(gens.iter().filter(|g| !g.is_identity()).cloned());
        if strong.is_empty() {
            group.finish();
            return Ok(group);
        }
        for g in &strong {
            if group.levels.iter().all(|l| g.apply(l.point) == l.point) {
                let p = g.first_moved().expect("non-identity");
                group.levels.push(Level::new(p, degree));
            }
        }
        if !group.levels.is_empty() {
            group.levels[0].gens = strong.clone();
        }
        for i in 1..group.levels.len() {
            let fixed: Vec<usize> = group.levels[..i].iter().map(|l| l.point).collect();
            group.levels[i].gens = strong
                .iter()
                .filter(|g| fixed.iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
        }
        for level in &mut group.levels {
            level.recompute(degree);
        }
        let top = group.levels.len() - 1;
        group.complete_from(top);
        group.finish();
        Ok(group)
    }

    /// Schreier–Sims main loop; levels above `start` must already be complete.
    fn complete_from(&mut self, start: usize) {
        let degree = self.degree;
        let mut i = start as isize;
        while i >= 0 {
            let lvl = i as usize;
            let mut jumped = None;
            'scan: for oi in 0..self.levels[lvl].orbit.len() {
                let alpha = self.levels[lvl].orbit[oi];
                for si in 0..self.levels[lvl].gens.len() {
                    let level = &self.levels[lvl];
                    let s = &level.gens[si];
                    let u_alpha = level.reps[alpha].as_ref().expect("rep");
                    let beta = s.apply(alpha);
                    let u_beta = level.reps[beta].as_ref().expect("rep");
                    let h = u_alpha.then(s).then(&u_beta.inverse());
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.strip(h, lvl + 1);
                    let target = if j < self.levels.len() {
                        Some(j)
                    } else if !residue.is_identity() {
                        let p = residue.first_moved().expect("non-identity");
                        self.levels.push(Level::new(p, degree));
                        Some(self.levels.len() - 1)
                    } else {
                        None
                    };
                    if let Some(j) = target {
                        for l in lvl + 1..=j {
                            self.levels[l].gens.push(residue.clone());
                            self.levels[l].recompute(degree);
                        }
                        jumped = Some(j);
                        break 'scan;
                    }
                }
            }
            match jumped {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let image = g.apply(level.point);
            match &level.reps[image] {
                None => return (g, l),
                Some(u) => {
                    if !u.is_identity() {
                        g = g.then(&u.inverse());
                    }
                }
            }
        }
        (g, self.levels.len())
    }

    fn finish(&mut self) {
        // Trailing trivial levels from a base prefix are kept; they cost nothing.
        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Lengths of the fundamental orbits, one per base point.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut all = Vec::new();
        for level in &self.levels {
            all.extend(level.gens.iter().cloned());
        }
        dedup(all.into_iter())
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Order as `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    /// Adds a generator, returning the enlarged group.
    pub fn with_generator(&self, g: &Permutation) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, g.degree()));
        }
        let mut out = self.clone();
        out.generators.push(g.clone());
        if self.contains(g) {
            return Ok(out);
        }
        if out.levels.iter().all(|l| g.apply(l.point) == l.point) {
            let p = g.first_moved().expect("non-identity");
            out.levels.push(Level::new(p, self.degree));
        }
        // A new level-0 generator may also belong to the deeper levels whose
        // base points it fixes; those levels get it too so that the
        // stabiliser chain stays consistent.
        let mut deepest = 0;
        for l in 0..out.levels.len() {
            let fixes_prefix = out.levels[..l].iter().all(|b| g.apply(b.point) == b.point);
            if fixes_prefix {
                out.levels[l].gens.push(g.clone());
                out.levels[l].recompute(self.degree);
                deepest = l;
            }
        }
        out.complete_from(deepest);
        out.finish();
        Ok(out)
    }

    /// Orbit of a point, in breadth-first order.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            k += 1;
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let orbit = self.orbit(p);
            for &q in &orbit {
                seen[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Point stabiliser, read off a stabiliser chain whose base starts at `point`.
    pub fn stabilizer(&self, point: usize) -> Result<PermGroup> {
        let chain = PermGroup::with_base_prefix(self.degree, &self.generators, &[point])?;
        let gens = chain.levels.get(1).map(|l| l.gens.clone()).unwrap_or_default();
        if gens.is_empty() {
            return Ok(PermGroup::trivial(self.degree));
        }
        PermGroup::from_generators(&gens)
    }

    pub fn is_two_transitive(&self) -> bool {
        if self.degree < 2 || !self.is_transitive() {
            return false;
        }
        match self.stabilizer(0) {
            Ok(stab) => stab.orbit(1).len() == self.degree - 1,
            Err(_) => false,
        }
    }

    pub fn is_full_symmetric(&self) -> bool {
        self.order == factorial(self.degree)
    }

    pub fn is_full_alternating(&self) -> bool {
        self.degree >= 2 && &self.order * 2u32 == factorial(self.degree)
    }

    /// Every element, as products of transversal representatives.
    pub fn elements(&self, bound: u64) -> Result<Vec<Permutation>> {
        match self.order.to_u64() {
            Some(n) if n <= bound => {}
            _ => {
                return Err(Error::OrderBound {
                    order: self.order.to_string(),
                    bound,
                })
            }
        }
        let mut current = vec![self.identity()];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(current.len() * level.orbit.len());
            for e in &current {
                for &p in &level.orbit {
                    let u = level.reps[p].as_ref().expect("rep");
                    next.push(e.then(u));
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// Smallest normal subgroup containing `elems`.
    pub fn normal_closure(&self, elems: &[Permutation]) -> Result<PermGroup> {
        for e in elems {
            if !self.contains(e) {
                return Err(Error::NotInGroup);
            }
        }
        let mut closure = PermGroup::trivial(self.degree);
        let mut queue: VecDeque<Permutation> = elems.iter().cloned().collect();
        while let Some(e) = queue.pop_front() {
            if closure.contains(&e) {
                continue;
            }
            closure = closure.with_generator(&e)?;
            for g in &self.generators {
                queue.push_back(e.conjugate_by(g));
            }
        }
        if closure.generators.is_empty() {
            return Ok(closure);
        }
        // Conjugates of every closure generator by every group generator stay inside.
        loop {
            let mut grew = false;
            let gens = closure.generators.clone();
            for n in &gens {
                for g in &self.generators {
                    let c = n.conjugate_by(g);
                    if !closure.contains(&c) {
                        closure = closure.with_generator(&c)?;
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(closure);
            }
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = commutator(a, b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Backtrack over the stabiliser chain for elements `g` with
    /// `g⁻¹·a·g = b` for every pair `(a, b)`, calling `visit` on each until it
    /// returns `false`.
    pub fn search_conjugating<F>(&self, pairs: &[(Permutation, Permutation)], mut visit: F)
    where
        F: FnMut(&Permutation) -> bool,
    {
        let n = self.degree;
        let mut state = SearchState {
            img: vec![UNSET; n],
            pre: vec![UNSET; n],
            trail: Vec::new(),
            pairs: pairs
                .iter()
                .map(|(a, b)| (a.clone(), b.clone(), a.inverse(), b.inverse()))
                .collect(),
        };
        let id = self.identity();
        self.search_level(0, &id, &mut state, &mut visit);
    }

    fn search_level<F>(
        &self,
        l: usize,
        suffix: &Permutation,
        state: &mut SearchState,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(&Permutation) -> bool,
    {
        if l == self.levels.len() {
            let ok = state
                .pairs
                .iter()
                .all(|(a, b, _, _)| a.conjugate_by(suffix) == *b);
            return if ok { visit(suffix) } else { true };
        }
        let level = &self.levels[l];
        let beta = level.point;
        let forced = state.img[beta];
        for &gamma in &level.orbit {
            let target = suffix.apply(gamma);
            if forced != UNSET && forced as usize != target {
                continue;
            }
            let mark = state.trail.len();
            if state.assign(beta, target) {
                let u = level.reps[gamma].as_ref().expect("rep");
                let next = u.then(suffix);
                if !self.search_level(l + 1, &next, state, visit) {
                    state.undo(mark);
                    return false;
                }
            }
            state.undo(mark);
        }
        true
    }

    /// Elements of the centraliser of `elems`, enumerated by the backtrack.
    pub fn centralizer_elements(&self, elems: &[Permutation], bound: u64) -> Result<Vec<Permutation>> {
        let pairs: Vec<_> = elems.iter().map(|e| (e.clone(), e.clone())).collect();
        let mut out = Vec::new();
        let mut overflow = false;
        self.search_conjugating(&pairs, |g| {
            out.push(g.clone());
            if out.len() as u64 > bound {
                overflow = true;
                return false;
            }
            true
        });
        if overflow {
            return Err(Error::OrderBound {
                order: format!(">{bound}"),
                bound,
            });
        }
        Ok(out)
    }

    pub fn center_order(&self) -> BigUint {
        if self.is_abelian() {
            return self.order.clone();
        }
        let pairs: Vec<_> = self
            .generators
            .iter()
            .map(|e| (e.clone(), e.clone()))
            .collect();
        let mut count = 0u64;
        self.search_conjugating(&pairs, |_| {
            count += 1;
            true
        });
        BigUint::from(count)
    }
}

const UNSET: u32 = u32::MAX;

struct SearchState {
    img: Vec<u32>,
    pre: Vec<u32>,
    trail: Vec<usize>,
    // (a, b, a⁻¹, b⁻¹)
    pairs: Vec<(Permutation, Permutation, Permutation, Permutation)>,
}

impl SearchState {
    /// Records `p ↦ q` and everything it forces; `false` on contradiction.
    fn assign(&mut self, p: usize, q: usize) -> bool {
        let mut queue = vec![(p, q)];
        while let Some((p, q)) = queue.pop() {
            let cur = self.img[p];
            if cur != UNSET {
                if cur as usize != q {
                    return false;
                }
                continue;
            }
            if self.pre[q] != UNSET {
                return false;
            }
            self.img[p] = q as u32;
            self.pre[q] = p as u32;
            self.trail.push(p);
            for (a, b, ai, bi) in &self.pairs {
                queue.push((a.apply(p), b.apply(q)));
                queue.push((ai.apply(p), bi.apply(q)));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let p = self.trail.pop().expect("trail");
            let q = self.img[p] as usize;
            self.img[p] = UNSET;
            self.pre[q] = UNSET;
        }
    }
}

/// Minimal interface for elements of a concretely multiplied finite group.
pub trait GroupElement: Clone + Eq + std::hash::Hash {
    fn mul(&self, other: &Self) -> Self;
}

impl GroupElement for Permutation {
    fn mul(&self, other: &Self) -> Self {
        self.then(other)
    }
}

pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
    a.inverse().then(&b.inverse()).then(a).then(b)
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn dedup(perms: impl Iterator<Item = Permutation>) -> Vec<Permutation> {
    let mut seen = HashSet::new();
    perms.filter(|p| seen.insert(p.clone())).collect()
}

pub fn group_from_generators(gens: &[Permutation]) -> Result<PermGroup> {
    PermGroup::from_generators(gens)
}

pub fn is_transitive(g: &PermGroup) -> bool {
    g.is_transitive()
}

pub fn is_two_transitive(g: &PermGroup) -> bool {
    g.is_two_transitive()
}

pub fn normal_closure(g: &PermGroup, elems: &[Permutation]) -> Result<PermGroup> {
    g.normal_closure(elems)
}

fn check_members(g: &PermGroup, elems: &[&Permutation]) -> Result<()> {
    if elems.iter().all(|e| g.contains(e)) {
        Ok(())
    } else {
        Err(Error::NotInGroup)
    }
}

/// Some `g ∈ G` with `g⁻¹·y·g = z`.
///
/// Elements of different cycle type are never conjugate; in a full symmetric
/// group a conjugator is written down by aligning cycles.
pub fn find_conjugator(g: &PermGroup, y: &Permutation, z: &Permutation) -> Result<Option<Permutation>> {
    check_members(g, &[y, z])?;
    if y.cycle_type() != z.cycle_type() {
        return Ok(None);
    }
    if g.is_full_symmetric() {
        return Ok(Some(align_cycles(y, z)));
    }
    let mut found = None;
    g.search_conjugating(&[(y.clone(), z.clone())], |h| {
        found = Some(h.clone());
        false
    });
    Ok(found)
}

/// Permutation sending the cycles of `y` onto the cycles of `z`, longest first.
fn align_cycles(y: &Permutation, z: &Permutation) -> Permutation {
    let mut cy = y.cycles();
    let mut cz = z.cycles();
    cy.sort_by_key(|c| std::cmp::Reverse(c.len()));
    cz.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut images = vec![0u32; y.degree()];
    for (a, b) in cy.iter().zip(&cz) {
        for (p, q) in a.iter().zip(b) {
            images[*p] = *q as u32;
        }
    }
    let g = Permutation::from_images_unchecked(images);
    debug_assert_eq!(&y.conjugate_by(&g), z);
    g
}

/// Some `g ∈ G` interchanging `y` and `z` under conjugation.
///
/// The solutions of `y^g = z` form a coset `C_G(y)·h`; the backtrack walks
/// that coset while also enforcing `z^g = y`.
pub fn find_swapping_conjugator(
    g: &PermGroup,
    y: &Permutation,
    z: &Permutation,
) -> Result<Option<Permutation>> {
    check_members(g, &[y, z])?;
    if y.cycle_type() != z.cycle_type() {
        return Ok(None);
    }
    let mut found = None;
    g.search_conjugating(&[(y.clone(), z.clone()), (z.clone(), y.clone())], |h| {
        found = Some(h.clone());
        false
    });
    Ok(found)
}

/// Structural invariants sufficient to tell apart the small groups that
/// turn up as automorphism groups here. Histogram and exponent are present
/// only for groups small enough to enumerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    #[serde(serialize_with = "crate::report::biguint_as_number")]
    pub order: BigUint,
    pub abelian: bool,
    pub exponent: Option<u64>,
    pub order_histogram: Option<BTreeMap<u64, u64>>,
    #[serde(serialize_with = "crate::report::biguint_as_number")]
    pub center_order: BigUint,
    #[serde(serialize_with = "crate::report::biguint_as_number")]
    pub derived_order: BigUint,
}

pub fn structure_fingerprint(g: &PermGroup) -> Result<Fingerprint> {
    structure_fingerprint_bounded(g, FINGERPRINT_BOUND)
}

pub fn structure_fingerprint_bounded(g: &PermGroup, bound: u64) -> Result<Fingerprint> {
    let elements = g.elements(bound)?;
    let mut histogram = BTreeMap::new();
    let mut exponent = 1u64;
    let mut center = 0u64;
    for e in &elements {
        let o = e.order();
        *histogram.entry(o).or_insert(0u64) += 1;
        exponent = exponent.lcm(&o);
        if g.generators().iter().all(|s| e.then(s) == s.then(e)) {
            center += 1;
        }
    }
    Ok(Fingerprint {
        order: g.order().clone(),
        abelian: g.is_abelian(),
        exponent: Some(exponent),
        order_histogram: Some(histogram),
        center_order: BigUint::from(center),
        derived_order: g.derived_subgroup()?.order().clone(),
    })
}

/// Fingerprint without element enumeration, usable for any order.
pub fn coarse_fingerprint(g: &PermGroup) -> Result<Fingerprint> {
    Ok(Fingerprint {
        order: g.order().clone(),
        abelian: g.is_abelian(),
        exponent: None,
        order_histogram: None,
        center_order: g.center_order(),
        derived_order: g.derived_subgroup()?.order().clone(),
    })
}

/// Full fingerprint when the group is small enough, coarse otherwise.
pub fn fingerprint(g: &PermGroup) -> Result<Fingerprint> {
    match g.order_u64() {
        Some(n) if n <= FINGERPRINT_BOUND => structure_fingerprint(g),
        _ => coarse_fingerprint(g),
    }
}
