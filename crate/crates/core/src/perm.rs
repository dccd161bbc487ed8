//! Finite permutations acting on the right.
//!
//! Points are 0-based internally and 1-based in every textual form. The
//! product `compose(p, q)` applies `p` first and then `q`, so a triple
//! `(x, y, z)` satisfies `x·y·z = 1` exactly when `compose(compose(x, y), z)`
//! is the identity.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    /// Parity of a product.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Multiset of cycle lengths, fixed points included, sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> CycleType {
        parts.sort_by_key(|&p| Reverse(p));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }

    pub fn parity(&self) -> Parity {
        if (self.degree() - self.num_cycles()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Order of any permutation with this cycle type.
    pub fn order(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &l| acc.lcm(&(l as u64)))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n {
                return Err(Error::PointOutOfRange {
                    point: i + 1,
                    degree: n,
                });
            }
            if seen[i] {
                return Err(Error::RepeatedPoint(i + 1));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Permutation {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles written with 1-based points.
    pub fn from_cycles<C: AsRef<[usize]>>(cycles: &[C], degree: usize) -> Result<Permutation> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(Error::RepeatedPoint(p));
                }
                used[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses disjoint-cycle notation such as `(1,2)(3,4)`; `()` is the identity.
    ///
    /// Cycles without commas are read digit by digit, as in `(12)(345)`.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation> {
        let cycles = parse_cycles(text)?;
        Permutation::from_cycles(&cycles, degree)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `g⁻¹·self·g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // p^(g⁻¹ s g) : g(p) ↦ g(s(p))
        let mut images = vec![0u32; self.images.len()];
        for (p, &sp) in self.images.iter().enumerate() {
            images[g.images[p] as usize] = g.images[sp as usize];
        }
        Permutation { images }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles (0-based), each starting at its least point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.apply(p);
            }
        }
        count
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(Vec::len).collect())
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().order()
    }

    pub fn parity(&self) -> Parity {
        if (self.degree() - self.num_cycles()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Least moved point, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i)
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend(&self, degree: usize) -> Permutation {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Places `other` on the points after `self`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree() as u32;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + shift));
        Permutation { images }
    }

    /// Restriction to the first `degree` points, which must be invariant.
    pub fn restrict(&self, degree: usize) -> Option<Permutation> {
        let images = self.images[..degree].to_vec();
        if images.iter().all(|&i| (i as usize) < degree) {
            Some(Permutation { images })
        } else {
            None
        }
    }
}

/// `p` then `q`.
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then(q))
}

pub fn perm_from_cycles<C: AsRef<[usize]>>(cycles: &[C], degree: usize) -> Result<Permutation> {
    Permutation::from_cycles(cycles, degree)
}

pub fn order_of(p: &Permutation) -> u64 {
    p.order()
}

pub fn parity_of(p: &Permutation) -> Parity {
    p.parity()
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let err = || Error::Parse {
        what: "permutation",
        input: text.to_string(),
    };
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest.strip_prefix('(').ok_or_else(err)?;
        let close = rest.find(')').ok_or_else(err)?;
        let body = rest[..close].trim();
        rest = rest[close + 1..].trim_start();
        if body.is_empty() {
            continue;
        }
        let points: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| err()))
                .collect::<Result<_>>()?
        } else if body.contains(char::is_whitespace) {
            body.split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|_| err()))
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(err))
                .collect::<Result<_>>()?
        };
        cycles.push(points);
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            any = true;
            let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[deg {}]", self, self.degree())
    }
}

/// Parses cycle notation, taking the degree from the largest point named.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Permutation> {
        let cycles = parse_cycles(s)?;
        let degree = cycles.iter().flatten().copied().max().unwrap_or(0);
        Permutation::from_cycles(&cycles, degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn empty_cycle_list_is_identity() {
        let e = perm_from_cycles::<Vec<usize>>(&[], 5).unwrap();
        assert!(e.is_identity());
        assert_eq!(e.degree(), 5);
        assert_eq!(e.to_string(), "()");
        assert_eq!(order_of(&e), 1);
        assert_eq!(parity_of(&e), Parity::Even);
    }

    #[test]
    fn cycles_render_and_parse() {
        let x = perm_from_cycles(&[vec![1, 2], vec![3, 4]], 5).unwrap();
        assert_eq!(x.to_string(), "(1,2)(3,4)");
        assert_eq!(p("(12)(34)", 5), x);
        assert_eq!(p("(1, 2) (3,4)", 5), x);
        let long: Vec<usize> = (1..=24).collect();
        let z = perm_from_cycles(&[long], 25).unwrap();
        assert_eq!(z.cycle_type(), CycleType::new(vec![24, 1]));
        assert_eq!(z.apply(24), 24);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            perm_from_cycles(&[vec![1, 2], vec![2, 3]], 4),
            Err(Error::RepeatedPoint(2))
        );
        assert!(matches!(
            perm_from_cycles(&[vec![1, 6]], 5),
            Err(Error::PointOutOfRange { point: 6, .. })
        ));
        assert!(Permutation::parse("(1,2", 3).is_err());
        assert!(compose(&Permutation::identity(3), &Permutation::identity(4)).is_err());
    }

    #[test]
    fn example5_triple_multiplies_to_one() {
        let x = p("(12)(34)", 5);
        let y = p("(13)(245)", 5);
        let z = p("(14)(253)", 5);
        let xyz = compose(&compose(&x, &y).unwrap(), &z).unwrap();
        assert!(xyz.is_identity());
        assert_eq!(x.then(&y).inverse(), z);
    }

    #[test]
    fn example9_y_cycle_type() {
        // k = 2, d = 25
        let x = p("(1,25)(2,15)(3,8)(4,7)(5,6)", 25);
        let z = perm_from_cycles(&[(1..=24).collect::<Vec<_>>()], 25).unwrap();
        let y = compose(&z, &x).unwrap().inverse();
        assert_eq!(y.cycle_type(), CycleType::new(vec![12, 8, 2, 2, 1]));
        assert_eq!(order_of(&y), 24);
        assert!(x.then(&y).then(&z).is_identity());
    }

    #[test]
    fn orders_and_parities_from_examples() {
        assert_eq!(order_of(&p("(123456)", 9)), 6);
        assert_eq!(parity_of(&p("(17)(28)(46)(59)", 9)), Parity::Even);
        let z10: Vec<usize> = (1..=8).collect();
        assert_eq!(
            parity_of(&perm_from_cycles(&[z10], 9).unwrap()),
            Parity::Odd
        );
    }

    #[test]
    fn conjugation_matches_definition() {
        let y = p("(13)(245)", 5);
        let g = p("(25)(34)", 5);
        let direct = g.inverse().then(&y).then(&g);
        assert_eq!(y.conjugate_by(&g), direct);
        assert_eq!(y.conjugate_by(&g), p("(14)(253)", 5));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (Permutation, Permutation)> {
        (1usize..12).prop_flat_map(|n| (arb_perm(n), arb_perm(n)))
    }

    proptest! {
        #[test]
        fn order_of_pq_equals_order_of_qp((p, q) in arb_pair()) {
            prop_assert_eq!(p.then(&q).order(), q.then(&p).order());
        }

        #[test]
        fn parity_is_a_homomorphism((p, q) in arb_pair()) {
            prop_assert_eq!(p.then(&q).parity(), p.parity().combine(q.parity()));
        }

        #[test]
        fn text_round_trip((p, _q) in arb_pair()) {
            let back = Permutation::parse(&p.to_string(), p.degree()).unwrap();
            prop_assert_eq!(back, p.clone());
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.pow(p.order()).is_identity());
        }
    }
}
