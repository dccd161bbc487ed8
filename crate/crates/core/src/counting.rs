//! Counting product-one tuples in conjugacy classes: brute force over the
//! group, Frobenius's character formula over a transcribed table, smooth
//! epimorphisms and kernels, and the congruence-subgroup arithmetic behind
//! the modular-curve family.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{factorial, PermGroup, ENUMERATION_BOUND};
use crate::perm::{CycleType, Permutation};
use crate::report::biguint_as_number;
use crate::triangle::{case3_genus, rh_genus, TriangleType};

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub id: usize,
    pub representative: Permutation,
    pub size: u64,
    pub order: u64,
    members: Option<Vec<Permutation>>,
}

impl ConjClass {
    /// `None` for classes described analytically rather than enumerated.
    pub fn members(&self) -> Option<&[Permutation]> {
        self.members.as_deref()
    }

    fn require_members(&self) -> Result<&[Permutation]> {
        self.members().ok_or_else(|| {
            Error::Precondition(format!("class {} was not enumerated", self.id))
        })
    }
}

/// The complete class list of a group with a lookup from elements to classes.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    classes: Vec<ConjClass>,
    index: HashMap<Permutation, usize>,
    by_cycle_type: Option<HashMap<CycleType, usize>>,
    order: u64,
}

impl ConjugacyClasses {
    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn group_order(&self) -> u64 {
        self.order
    }

    pub fn class_of(&self, g: &Permutation) -> Option<usize> {
        match &self.by_cycle_type {
            Some(map) => map.get(&g.cycle_type()).copied(),
            None => self.index.get(g).copied(),
        }
    }

    /// Class ids whose elements have exactly the given order.
    pub fn with_order(&self, order: u64) -> Vec<usize> {
        self.classes.iter().filter(|c| c.order == order).map(|c| c.id).collect()
    }

    /// ATLAS-style names: element order followed by a letter per class of
    /// that order, in list order.
    pub fn labels(&self) -> Vec<String> {
        atlas_labels(self.classes.iter().map(|c| c.order))
    }
}

fn atlas_labels(orders: impl Iterator<Item = u64>) -> Vec<String> {
    let mut seen: BTreeMap<u64, u8> = BTreeMap::new();
    orders
        .map(|o| {
            let k = seen.entry(o).or_insert(0);
            let label = format!("{o}{}", (b'A' + *k) as char);
            *k += 1;
            label
        })
        .collect()
}

/// Classes by enumeration, or by cycle type for symmetric groups too large
/// to enumerate.
pub fn conjugacy_classes(g: &PermGroup) -> Result<ConjugacyClasses> {
    conjugacy_classes_bounded(g, ENUMERATION_BOUND)
}

pub fn conjugacy_classes_bounded(g: &PermGroup, bound: u64) -> Result<ConjugacyClasses> {
    let fits = g.order_u64().is_some_and(|o| o <= bound);
    if !fits && g.is_full_symmetric() {
        return Ok(symmetric_classes(g.degree()));
    }
    let elements = g.elements(bound)?;
    let mut assigned: HashMap<Permutation, usize> = HashMap::with_capacity(elements.len());
    let mut orbits: Vec<Vec<Permutation>> = Vec::new();
    for e in &elements {
        if assigned.contains_key(e) {
            continue;
        }
        let k = orbits.len();
        let mut orbit = vec![e.clone()];
        assigned.insert(e.clone(), k);
        let mut i = 0;
        while i < orbit.len() {
            for s in g.generators() {
                let c = orbit[i].conjugate_by(s);
                if !assigned.contains_key(&c) {
                    assigned.insert(c.clone(), k);
                    orbit.push(c);
                }
            }
            i += 1;
        }
        orbit.sort();
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| (a[0].order(), a.len(), &a[0]).cmp(&(b[0].order(), b.len(), &b[0])));
    let mut index = HashMap::with_capacity(elements.len());
    let classes = orbits
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            for m in &members {
                index.insert(m.clone(), id);
            }
            ConjClass {
                id,
                representative: members[0].clone(),
                size: members.len() as u64,
                order: members[0].order(),
                members: Some(members),
            }
        })
        .collect();
    Ok(ConjugacyClasses {
        classes,
        index,
        by_cycle_type: None,
        order: elements.len() as u64,
    })
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// Classes of `S_d` indexed by partitions of `d`, without enumeration.
pub fn symmetric_classes(d: usize) -> ConjugacyClasses {
    let mut parts = Vec::new();
    partitions(d, d, &mut Vec::new(), &mut parts);
    let total = factorial(d);
    let mut classes: Vec<ConjClass> = parts
        .into_iter()
        .map(|p| {
            let mut cycles = Vec::new();
            let mut next = 1usize;
            let mut multiplicity: BTreeMap<usize, u32> = BTreeMap::new();
            for &len in &p {
                cycles.push((next..next + len).collect::<Vec<_>>());
                next += len;
                *multiplicity.entry(len).or_insert(0) += 1;
            }
            let rep = Permutation::from_cycles(&cycles, d).expect("disjoint cycles");
            let centralizer = multiplicity.iter().fold(BigUint::one(), |acc, (&len, &m)| {
                acc * BigUint::from(len).pow(m) * factorial(m as usize)
            });
            let size = (&total / centralizer).to_u64().unwrap_or(u64::MAX);
            ConjClass {
                id: 0,
                order: rep.order(),
                representative: rep,
                size,
                members: None,
            }
        })
        .collect();
    classes.sort_by_key(|a| (a.order, a.size));
    let mut by_cycle_type = HashMap::new();
    for (id, c) in classes.iter_mut().enumerate() {
        c.id = id;
        by_cycle_type.insert(c.representative.cycle_type(), id);
    }
    ConjugacyClasses {
        classes,
        index: HashMap::new(),
        by_cycle_type: Some(by_cycle_type),
        order: total.to_u64().unwrap_or(u64::MAX),
    }
}

/// Number of `(x, y, z) ∈ X × Y × Z` with `xyz = 1`.
pub fn count_triples_bruteforce(x: &ConjClass, y: &ConjClass, z: &ConjClass) -> Result<u64> {
    let zs: HashSet<&Permutation> = z.require_members()?.iter().collect();
    let ys = y.require_members()?;
    let mut count = 0;
    for a in x.require_members()? {
        for b in ys {
            if zs.contains(&a.then(b).inverse()) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Number of tuples from the given classes whose product is the identity.
pub fn count_tuples_bruteforce(classes: &[&ConjClass]) -> Result<u64> {
    let (last, init) = classes
        .split_last()
        .ok_or_else(|| Error::Precondition("at least one class is needed".into()))?;
    let mut partial: HashMap<Permutation, u64> = HashMap::new();
    match init.first() {
        None => {
            return Ok(last.require_members()?.iter().filter(|m| m.is_identity()).count() as u64);
        }
        Some(first) => {
            for m in first.require_members()? {
                *partial.entry(m.clone()).or_insert(0) += 1;
            }
        }
    }
    for class in &init[1..] {
        let members = class.require_members()?;
        let mut next = HashMap::new();
        for (p, k) in &partial {
            for m in members {
                *next.entry(p.then(m)).or_insert(0) += k;
            }
        }
        partial = next;
    }
    let closing: HashSet<&Permutation> = last.require_members()?.iter().collect();
    Ok(partial
        .iter()
        .filter(|(p, _)| closing.contains(&p.inverse()))
        .map(|(_, k)| k)
        .sum())
}

/// A transcribed character table. Values are complex approximations of
/// algebraic integers; sizes, orders and power maps are exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable<T> {
    pub name: String,
    pub order: u64,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
    /// `power_maps[p][i]` is the class containing the `p`-th powers of class `i`.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    pub values: Vec<Vec<Complex<T>>>,
    pub note: Option<String>,
}

pub type CharacterTable64 = CharacterTable<f64>;
pub type CharacterTable32 = CharacterTable<f32>;

const INTEGRALITY_TOLERANCE: f64 = 1e-3;

fn table_err(msg: impl Into<String>) -> Error {
    Error::CharacterTable(msg.into())
}

fn parse_value<T: Float + FromPrimitive>(token: &str) -> Result<Complex<T>> {
    let bad = || Error::Parse {
        what: "character value",
        input: token.to_string(),
    };
    let real = |v: f64| T::from_f64(v).map(|t| Complex::new(t, T::zero())).ok_or_else(bad);
    if let Some((p, q)) = token.split_once('/') {
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return real(p as f64 / q as f64);
    }
    if let Ok(v) = token.parse::<f64>() {
        return real(v);
    }
    let c: Complex<f64> = token.parse().map_err(|_| bad())?;
    match (T::from_f64(c.re), T::from_f64(c.im)) {
        (Some(re), Some(im)) => Ok(Complex::new(re, im)),
        _ => Err(bad()),
    }
}

fn parse_list<V: std::str::FromStr>(what: &'static str, rest: &str) -> Result<Vec<V>> {
    rest.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                what,
                input: t.to_string(),
            })
        })
        .collect()
}

impl<T: Float + FromPrimitive> CharacterTable<T> {
    /// Parses the line-oriented fixture format and validates the result.
    /// Class ids in power maps are 1-based in the file.
    pub fn parse(text: &str) -> Result<CharacterTable<T>> {
        let mut name = None;
        let mut order = None;
        let mut k = None;
        let mut sizes = None;
        let mut orders = None;
        let mut note = None;
        let mut power_maps = BTreeMap::new();
        let mut values = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "group" => name = Some(rest.to_string()),
                "note" => note = Some(rest.to_string()),
                "order" => order = Some(parse_list::<u64>("order", rest)?.first().copied().ok_or_else(|| table_err("empty order"))?),
                "classes" => k = Some(parse_list::<usize>("class count", rest)?.first().copied().ok_or_else(|| table_err("empty class count"))?),
                "sizes" => sizes = Some(parse_list::<u64>("class sizes", rest)?),
                "orders" => orders = Some(parse_list::<u64>("element orders", rest)?),
                "powermap" => {
                    let mut parts = rest.split_whitespace();
                    let p: u64 = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| table_err(format!("bad power map line: {line}")))?;
                    let map = parts
                        .map(|t| match t.parse::<usize>() {
                            Ok(v) if v >= 1 => Ok(v - 1),
                            _ => Err(Error::Parse {
                                what: "power map",
                                input: t.to_string(),
                            }),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    power_maps.insert(p, map);
                }
                _ => values.push(line.split_whitespace().map(parse_value::<T>).collect::<Result<Vec<_>>>()?),
            }
        }
        let table = CharacterTable {
            name: name.ok_or_else(|| table_err("missing `group` line"))?,
            order: order.ok_or_else(|| table_err("missing `order` line"))?,
            sizes: sizes.ok_or_else(|| table_err("missing `sizes` line"))?,
            orders: orders.ok_or_else(|| table_err("missing `orders` line"))?,
            power_maps,
            values,
            note,
        };
        let k = k.ok_or_else(|| table_err("missing `classes` line"))?;
        if table.sizes.len() != k || table.orders.len() != k || table.values.len() != k {
            return Err(table_err(format!(
                "expected {k} classes and {k} characters, found {} sizes, {} orders, {} rows",
                table.sizes.len(),
                table.orders.len(),
                table.values.len()
            )));
        }
        table.validate()?;
        Ok(table)
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> Vec<String> {
        atlas_labels(self.orders.iter().copied())
    }

    fn tolerance() -> T {
        let fixed = T::from_f64(1e-6).expect("float");
        let scaled = T::epsilon() * T::from_f64(1e3).expect("float");
        fixed.max(scaled)
    }

    /// Checks class sizes, degrees, orthogonality of rows and power maps.
    pub fn validate(&self) -> Result<()> {
        let k = self.num_classes();
        if self.values.iter().any(|row| row.len() != k) {
            return Err(table_err("table is not square"));
        }
        if self.sizes.iter().sum::<u64>() != self.order {
            return Err(table_err("class sizes do not sum to the group order"));
        }
        if let Some(i) = self.sizes.iter().position(|s| s == &0 || !self.order.is_multiple_of(*s)) {
            return Err(table_err(format!("class {} has size not dividing the order", i + 1)));
        }
        if self.sizes.first() != Some(&1) || self.orders.first() != Some(&1) {
            return Err(table_err("first class must be the identity"));
        }
        let tol = Self::tolerance();
        let order_t = T::from_u64(self.order).expect("float");
        let mut degree_sum = T::zero();
        for row in &self.values {
            let d = row[0];
            if d.im.abs() > tol || d.re < T::one() - tol || (d.re - d.re.round()).abs() > tol {
                return Err(table_err("character degrees must be positive integers"));
            }
            degree_sum = degree_sum + d.re * d.re;
        }
        if (degree_sum - order_t).abs() > tol * order_t {
            return Err(table_err("squared degrees do not sum to the group order"));
        }
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in self.values.iter().enumerate().skip(i) {
                let mut inner = Complex::new(T::zero(), T::zero());
                for c in 0..k {
                    let w = T::from_u64(self.sizes[c]).expect("float");
                    inner = inner + a[c] * b[c].conj() * w;
                }
                inner = inner / order_t;
                let expect = if i == j { T::one() } else { T::zero() };
                if (inner.re - expect).abs() > tol || inner.im.abs() > tol {
                    return Err(table_err(format!("rows {} and {} are not orthonormal", i + 1, j + 1)));
                }
            }
        }
        for (&p, map) in &self.power_maps {
            if map.len() != k || map.iter().any(|&c| c >= k) {
                return Err(table_err(format!("power map {p} is malformed")));
            }
            for (c, &image) in map.iter().enumerate() {
                let o = self.orders[c];
                if self.orders[image] != o / o.gcd(&p) {
                    return Err(table_err(format!("power map {p} sends class {} to the wrong order", c + 1)));
                }
            }
        }
        Ok(())
    }

    /// Frobenius's count of `r`-tuples from the classes with product one.
    pub fn frobenius_count_r(&self, ids: &[usize]) -> Result<u64> {
        let r = ids.len();
        if r < 2 {
            return Err(Error::Precondition("Frobenius's formula needs r ≥ 2".into()));
        }
        if let Some(&bad) = ids.iter().find(|&&c| c >= self.num_classes()) {
            return Err(Error::Precondition(format!("class id {bad} out of range")));
        }
        let mut sum = Complex::new(T::zero(), T::zero());
        for row in &self.values {
            let mut term = Complex::new(T::one(), T::zero());
            for &c in ids {
                term = term * row[c];
            }
            sum = sum + term / row[0].powi(r as i32 - 2);
        }
        let mut scale = Ratio::new(BigInt::one(), BigInt::from(self.order));
        for &c in ids {
            scale *= BigInt::from(self.sizes[c]);
        }
        let scale = T::from_f64(scale.to_f64().unwrap_or(f64::INFINITY)).expect("float");
        let value = sum * scale;
        let rounded = value.re.round();
        let tol = T::from_f64(INTEGRALITY_TOLERANCE).expect("float");
        if (value.re - rounded).abs() > tol || value.im.abs() > tol || rounded < T::zero() {
            return Err(Error::NonIntegralCount {
                value: value.re.to_f64().unwrap_or(f64::NAN),
            });
        }
        rounded.to_u64().ok_or(Error::NonIntegralCount {
            value: value.re.to_f64().unwrap_or(f64::NAN),
        })
    }

    pub fn frobenius_count(&self, x: usize, y: usize, z: usize) -> Result<u64> {
        self.frobenius_count_r(&[x, y, z])
    }
}

pub fn frobenius_count<T: Float + FromPrimitive>(table: &CharacterTable<T>, x: usize, y: usize, z: usize) -> Result<u64> {
    table.frobenius_count(x, y, z)
}

pub fn frobenius_count_r<T: Float + FromPrimitive>(table: &CharacterTable<T>, ids: &[usize]) -> Result<u64> {
    table.frobenius_count_r(ids)
}

/// Assigns each computed class its table column, matching element order,
/// class size and every power map given in the table.
pub fn match_classes<T>(table: &CharacterTable<T>, classes: &ConjugacyClasses) -> Result<Vec<usize>> {
    let k = classes.len();
    if table.sizes.len() != k || table.order != classes.group_order() {
        return Err(table_err(format!(
            "table {} has {} classes and order {}, group has {k} and {}",
            table.name,
            table.sizes.len(),
            table.order,
            classes.group_order()
        )));
    }
    let mut computed_maps: Vec<(u64, Vec<usize>)> = Vec::new();
    for &p in table.power_maps.keys() {
        let map = classes
            .classes()
            .iter()
            .map(|c| classes.class_of(&c.representative.pow(p)).ok_or_else(|| table_err("power of an element left the group")))
            .collect::<Result<Vec<_>>>()?;
        computed_maps.push((p, map));
    }
    let candidates: Vec<Vec<usize>> = classes
        .classes()
        .iter()
        .map(|c| (0..k).filter(|&t| table.orders[t] == c.order && table.sizes[t] == c.size).collect())
        .collect();
    let mut assignment = vec![usize::MAX; k];
    let mut used = vec![false; k];
    let consistent = |assignment: &[usize]| {
        computed_maps.iter().all(|(p, map)| {
            let tmap = &table.power_maps[p];
            (0..k).all(|c| {
                let (a, b) = (assignment[c], assignment[map[c]]);
                a == usize::MAX || b == usize::MAX || tmap[a] == b
            })
        })
    };
    fn search(
        c: usize,
        candidates: &[Vec<usize>],
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        consistent: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if c == candidates.len() {
            return true;
        }
        for &t in &candidates[c] {
            if used[t] {
                continue;
            }
            assignment[c] = t;
            used[t] = true;
            if consistent(assignment) && search(c + 1, candidates, assignment, used, consistent) {
                return true;
            }
            used[t] = false;
            assignment[c] = usize::MAX;
        }
        false
    }
    if search(0, &candidates, &mut assignment, &mut used, &consistent) {
        Ok(assignment)
    } else {
        Err(table_err(format!("classes of the group do not match table {}", table.name)))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EpiCount {
    /// Product-one triples of the exact orders.
    pub triples: u64,
    /// Those among them that generate the group.
    pub generating: u64,
}

/// Triples of exact orders `(l, m, n)` with product one, and how many of
/// them generate `g`. Generation is conjugation invariant, so `x` runs over
/// class representatives and each hit is weighted by the class size.
pub fn count_smooth_epimorphisms(g: &PermGroup, classes: &ConjugacyClasses, ty: &TriangleType) -> Result<EpiCount> {
    let mut out = EpiCount::default();
    for &xi in &classes.with_order(ty.l) {
        let xc = &classes.classes()[xi];
        let x = &xc.representative;
        for &yi in &classes.with_order(ty.m) {
            for y in classes.classes()[yi].require_members()? {
                let z = x.then(y).inverse();
                if z.order() != ty.n {
                    continue;
                }
                out.triples += xc.size;
                if PermGroup::from_generators(&[x.clone(), y.clone()])?.order() == g.order() {
                    out.generating += xc.size;
                }
            }
        }
    }
    Ok(out)
}

pub fn count_kernels(epi_count: &BigUint, aut_order: &BigUint) -> Result<BigUint> {
    if aut_order.is_zero() {
        return Err(Error::Precondition("|Aut G| must be positive".into()));
    }
    let (q, r) = epi_count.div_rem(aut_order);
    if !r.is_zero() {
        return Err(Error::NotDivisible(epi_count.to_string(), aut_order.to_string()));
    }
    Ok(q)
}

/// `|Aut S_d|`, which is `d!` except for `d = 2` and `d = 6`.
pub fn symmetric_aut_order(d: usize) -> BigUint {
    match d {
        0..=2 => BigUint::one(),
        6 => BigUint::from(1440u32),
        _ => factorial(d),
    }
}

/// `|Aut PGL₂(p)| = |PGL₂(p)|` for `p > 3`.
pub fn pgl2_aut_order(p: u64) -> Result<BigUint> {
    if p <= 3 || !crate::linfp::is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(BigUint::from(p) * (p * p - 1))
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn integral(r: Ratio<BigInt>, what: &str) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::Precondition(format!("{what} = {r} is not an integer")))
    }
}

/// `|Γ : Γ(m)| = (m³/2)·∏(1 − 1/p²)` over the primes dividing `m > 2`.
pub fn gamma_index(m: u64) -> Result<BigUint> {
    if m <= 2 {
        return Err(Error::Precondition(format!("level {m} must exceed 2")));
    }
    let mut r = Ratio::from_integer(BigInt::from(m).pow(3u32)) / BigInt::from(2);
    for p in prime_divisors(m) {
        let p2 = BigInt::from(p * p);
        r *= Ratio::new(&p2 - 1, p2);
    }
    integral(r, "|Γ:Γ(m)|").map(|v| v.magnitude().clone())
}

/// `|SL₂(Z_m)|` by running over all matrices mod `m`.
pub fn sl2_order_bruteforce(m: u64) -> u64 {
    let mut count = 0;
    for a in 0..m {
        for d in 0..m {
            let ad = a * d % m;
            for b in 0..m {
                for c in 0..m {
                    if (ad + m * m - b * c % m) % m == 1 % m {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// The pair of dessins on the modular curve `X(4n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularDessinData {
    pub n: u64,
    pub level: u64,
    #[serde(serialize_with = "biguint_as_number")]
    pub gamma_index: BigUint,
    #[serde(serialize_with = "biguint_as_number")]
    pub aut_order: BigUint,
    #[serde(serialize_with = "biguint_as_number")]
    pub genus: BigUint,
    pub types: [TriangleType; 2],
}

pub fn modular_dessin_data(n: u64) -> Result<ModularDessinData> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let level = 4 * n;
    let index = gamma_index(level)?;
    let (aut, rem) = index.div_rem(&BigUint::from(6u32));
    if !rem.is_zero() {
        return Err(Error::NotDivisible(index.to_string(), "6".into()));
    }
    let mut odd = Ratio::from_integer(BigInt::one());
    for p in prime_divisors(n).into_iter().filter(|&p| p != 2) {
        let p2 = BigInt::from(p * p);
        odd *= Ratio::new(&p2 - 1, p2);
    }
    let closed_aut = integral(odd.clone() * BigInt::from(4 * n.pow(3)), "|Aut H|")?;
    if closed_aut != BigInt::from(aut.clone()) {
        return Err(Error::Construction(format!("|Γ:Γ(4n)|/6 = {aut} but 4n³∏ = {closed_aut}")));
    }
    let genus = integral(
        odd * BigInt::from(2 * n as i64 - 3) * BigInt::from(n * n) + BigInt::one(),
        "genus",
    )?;
    if genus < BigInt::zero() {
        return Err(Error::Construction(format!("negative genus {genus}")));
    }
    let types = [
        TriangleType::of(2 * n, 2 * n, 2 * n),
        TriangleType::of(n, 4 * n, 4 * n),
    ];
    for ty in &types {
        if rh_genus(ty, &aut)? != genus {
            return Err(Error::Construction(format!("type {ty} gives a different genus")));
        }
    }
    if case3_genus(n, &aut)? != genus {
        return Err(Error::Construction("case 3 genus formula disagrees".into()));
    }
    Ok(ModularDessinData {
        n,
        level,
        gamma_index: index,
        aut_order: aut,
        genus: genus.magnitude().clone(),
        types,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTripleCount {
    pub class_triple: [String; 3],
    pub brute_count: u64,
    pub frobenius_count: Option<u64>,
}

/// Counting report for one group and one type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub group: String,
    #[serde(serialize_with = "biguint_as_number")]
    pub order: BigUint,
    pub orders: TriangleType,
    pub rows: Vec<ClassTripleCount>,
    pub brute_count: u64,
    pub frobenius_count: Option<u64>,
    pub epi_count: u64,
    pub kernel_count: Option<u64>,
}

/// Brute-force and, given a table, Frobenius counts over every class triple
/// of the given element orders; fails if the two disagree anywhere.
pub fn count_report<T: Float + FromPrimitive>(
    group_name: &str,
    g: &PermGroup,
    ty: &TriangleType,
    table: Option<&CharacterTable<T>>,
    aut_order: Option<&BigUint>,
) -> Result<CountReport> {
    let classes = conjugacy_classes(g)?;
    let matching = table.map(|t| match_classes(t, &classes)).transpose()?;
    let labels = match (table, &matching) {
        (Some(t), Some(m)) => {
            let tl = t.labels();
            m.iter().map(|&i| tl[i].clone()).collect()
        }
        _ => classes.labels(),
    };
    let mut rows = Vec::new();
    let (mut brute_total, mut frob_total) = (0u64, 0u64);
    let cs = classes.classes();
    for &x in &classes.with_order(ty.l) {
        for &y in &classes.with_order(ty.m) {
            for &z in &classes.with_order(ty.n) {
                let brute = count_triples_bruteforce(&cs[x], &cs[y], &cs[z])?;
                let frob = match (table, &matching) {
                    (Some(t), Some(m)) => Some(t.frobenius_count(m[x], m[y], m[z])?),
                    _ => None,
                };
                if let Some(f) = frob {
                    if f != brute {
                        return Err(Error::Construction(format!(
                            "class triple ({}, {}, {}): brute force {brute}, Frobenius {f}",
                            labels[x], labels[y], labels[z]
                        )));
                    }
                    frob_total += f;
                }
                brute_total += brute;
                rows.push(ClassTripleCount {
                    class_triple: [labels[x].clone(), labels[y].clone(), labels[z].clone()],
                    brute_count: brute,
                    frobenius_count: frob,
                });
            }
        }
    }
    let epi = count_smooth_epimorphisms(g, &classes, ty)?;
    let kernel_count = aut_order
        .map(|a| count_kernels(&BigUint::from(epi.generating), a))
        .transpose()?
        .map(|k| k.to_u64().unwrap_or(u64::MAX));
    Ok(CountReport {
        group: group_name.to_string(),
        order: g.order().clone(),
        orders: *ty,
        rows,
        brute_count: brute_total,
        frobenius_count: table.map(|_| frob_total),
        epi_count: epi.generating,
        kernel_count,
    })
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class {} of order {} and size {}, e.g. {}", self.id, self.order, self.size, self.representative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linfp::pgl2_as_perm_group;
    use proptest::prelude::*;

    const S4: &str = include_str!("../../../fixtures/s4.tbl");
    const S5: &str = include_str!("../../../fixtures/s5.tbl");
    const PGL2_7: &str = include_str!("../../../fixtures/pgl2_7.tbl");
    const TRIVIAL: &str = include_str!("../../../fixtures/trivial.tbl");

    fn sym(d: usize) -> PermGroup {
        let cycle: Vec<usize> = (1..=d).collect();
        PermGroup::from_generators(&[
            Permutation::from_cycles(&[[1, 2]], d).unwrap(),
            Permutation::from_cycles(&[cycle], d).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn cyclic_classes_are_singletons() {
        let c3 = PermGroup::from_generators(&[Permutation::parse("(123)", 3).unwrap()]).unwrap();
        let classes = conjugacy_classes(&c3).unwrap();
        assert_eq!(classes.len(), 3);
        assert!(classes.classes().iter().all(|c| c.size == 1));
    }

    #[test]
    fn symmetric_class_counts() {
        let s5 = conjugacy_classes(&sym(5)).unwrap();
        assert_eq!(s5.len(), 7);
        let analytic = symmetric_classes(5);
        let mut a: Vec<(u64, u64)> = analytic.classes().iter().map(|c| (c.order, c.size)).collect();
        let mut b: Vec<(u64, u64)> = s5.classes().iter().map(|c| (c.order, c.size)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let s9 = symmetric_classes(9);
        assert_eq!(s9.len(), 30);
        assert_eq!(s9.classes().iter().map(|c| c.size).sum::<u64>(), 362880);
    }

    #[test]
    fn large_symmetric_groups_use_cycle_types() {
        let classes = conjugacy_classes_bounded(&sym(7), 100).unwrap();
        assert_eq!(classes.len(), 15);
        let g = Permutation::parse("(1,2,3)(4,5)", 7).unwrap();
        let id = classes.class_of(&g).unwrap();
        assert_eq!(classes.classes()[id].size, 420);
        assert!(classes.classes()[id].members().is_none());
    }

    #[test]
    fn pgl2_7_classes() {
        let g = pgl2_as_perm_group(7).unwrap();
        let classes = conjugacy_classes(g.group()).unwrap();
        assert_eq!(classes.len(), 9);
        assert_eq!(classes.classes().iter().map(|c| c.size).sum::<u64>(), 336);
    }

    #[test]
    fn identity_classes_count_once() {
        let g = sym(4);
        let classes = conjugacy_classes(&g).unwrap();
        let e = &classes.classes()[0];
        assert_eq!(count_triples_bruteforce(e, e, e).unwrap(), 1);
    }

    #[test]
    fn fixtures_validate() {
        for text in [S4, S5, PGL2_7, TRIVIAL] {
            CharacterTable64::parse(text).unwrap();
            CharacterTable32::parse(text).unwrap();
        }
        let t = CharacterTable64::parse(PGL2_7).unwrap();
        assert_eq!(t.num_classes(), 9);
        assert_eq!(t.labels()[..6], ["1A", "2A", "3A", "4A", "7A", "2B"]);
    }

    #[test]
    fn corrupt_tables_are_rejected() {
        let broken = S4.replace("3 -1 0 1 -1", "3 -1 0 1 1");
        assert!(matches!(CharacterTable64::parse(&broken), Err(Error::CharacterTable(_))));
        let sizes = S4.replace("sizes 1 3 8 6 6", "sizes 1 3 8 6 5");
        assert!(CharacterTable64::parse(&sizes).is_err());
        let short = S4.replace("classes 5", "classes 4");
        assert!(CharacterTable64::parse(&short).is_err());
        assert!(matches!(parse_value::<f64>("1+"), Err(Error::Parse { .. })));
    }

    #[test]
    fn value_syntax() {
        assert_eq!(parse_value::<f64>("-3").unwrap(), Complex::new(-3.0, 0.0));
        assert_eq!(parse_value::<f64>("1/2").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_value::<f64>("-0.5+1.5i").unwrap(), Complex::new(-0.5, 1.5));
        assert_eq!(parse_value::<f64>("2i").unwrap(), Complex::new(0.0, 2.0));
    }

    #[test]
    fn trivial_table() {
        let t = CharacterTable64::parse(TRIVIAL).unwrap();
        assert_eq!(t.frobenius_count(0, 0, 0).unwrap(), 1);
    }

    #[test]
    fn pairs_close_up_only_with_inverse_classes() {
        let t = CharacterTable64::parse(S5).unwrap();
        for c in 0..t.num_classes() {
            assert_eq!(t.frobenius_count_r(&[c, c]).unwrap(), t.sizes[c]);
        }
        assert!(t.frobenius_count_r(&[1]).is_err());
    }

    #[test]
    fn transposition_quadruples_in_s4() {
        let g = sym(4);
        let classes = conjugacy_classes(&g).unwrap();
        let t = CharacterTable64::parse(S4).unwrap();
        let m = match_classes(&t, &classes).unwrap();
        let tr = classes.class_of(&Permutation::parse("(12)", 4).unwrap()).unwrap();
        let c = &classes.classes()[tr];
        let brute = count_tuples_bruteforce(&[c, c, c, c]).unwrap();
        assert_eq!(t.frobenius_count_r(&[m[tr]; 4]).unwrap(), brute);
        let three = count_tuples_bruteforce(&[c, c, c]).unwrap();
        assert_eq!(three, 0);
    }

    #[test]
    fn pgl2_7_golden() {
        let g = pgl2_as_perm_group(7).unwrap();
        let t = CharacterTable64::parse(PGL2_7).unwrap();
        let aut = pgl2_aut_order(7).unwrap();
        let r = count_report("pgl2:7", g.group(), &TriangleType::of(2, 6, 6), Some(&t), Some(&aut)).unwrap();
        assert_eq!(r.brute_count, 336);
        assert_eq!(r.frobenius_count, Some(336));
        assert_eq!(r.epi_count, 336);
        assert_eq!(r.kernel_count, Some(1));
    }

    #[test]
    fn s5_kernels() {
        let g = sym(5);
        let classes = conjugacy_classes(&g).unwrap();
        let e = count_smooth_epimorphisms(&g, &classes, &TriangleType::of(2, 6, 6)).unwrap();
        assert!(e.generating > 0);
        let k = count_kernels(&BigUint::from(e.generating), &symmetric_aut_order(5)).unwrap();
        assert!(k >= BigUint::one());
    }

    #[test]
    fn c2_has_no_222_triples() {
        let c2 = PermGroup::from_generators(&[Permutation::parse("(12)", 2).unwrap()]).unwrap();
        let classes = conjugacy_classes(&c2).unwrap();
        let e = count_smooth_epimorphisms(&c2, &classes, &TriangleType::of(2, 2, 2)).unwrap();
        assert_eq!(e, EpiCount::default());
    }

    #[test]
    fn kernel_division() {
        let n = |v: u32| BigUint::from(v);
        assert_eq!(count_kernels(&n(336), &n(336)).unwrap(), n(1));
        assert_eq!(count_kernels(&n(0), &n(120)).unwrap(), n(0));
        assert!(matches!(count_kernels(&n(100), &n(120)), Err(Error::NotDivisible(..))));
    }

    #[test]
    fn congruence_indices() {
        assert_eq!(gamma_index(4).unwrap(), BigUint::from(24u32));
        for m in 3..=12 {
            assert_eq!(gamma_index(m).unwrap(), BigUint::from(sl2_order_bruteforce(m) / 2), "m = {m}");
        }
        assert!(gamma_index(2).is_err());
    }

    #[test]
    fn modular_dessins() {
        let d = modular_dessin_data(1).unwrap();
        assert_eq!((d.aut_order.clone(), d.genus.clone()), (BigUint::from(4u32), BigUint::zero()));
        let d = modular_dessin_data(3).unwrap();
        assert_eq!(d.aut_order, BigUint::from(96u32));
        assert_eq!(d.genus, BigUint::from(25u32));
        for n in 1..=20 {
            modular_dessin_data(n).unwrap();
        }
    }

    proptest! {
        #[test]
        fn products_partition_pairs(xi in 0usize..5, yi in 0usize..5) {
            let g = sym(4);
            let classes = conjugacy_classes(&g).unwrap();
            let cs = classes.classes();
            let total: u64 = cs.iter().map(|z| count_triples_bruteforce(&cs[xi], &cs[yi], z).unwrap()).sum();
            prop_assert_eq!(total, cs[xi].size * cs[yi].size);
        }
    }
}
