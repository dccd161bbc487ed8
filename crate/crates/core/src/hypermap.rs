//! Combinatorial hypermaps as transitive permutation pairs.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, PermGroup, ENUMERATION_BOUND};
use crate::perm::Permutation;

/// A permutation of the roles (hypervertex, hyperedge, hyperface).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    /// `(x, y, z)`
    Identity,
    /// `(y, z, x)`
    Rotate,
    /// `(z, x, y)`
    RotateTwice,
    /// `(y, x^y, z)`: colours transposed.
    SwapColours,
    /// `(x^y, z, y)`
    SwapRotate,
    /// `(z, y, x^y)`
    SwapRotateTwice,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::Identity,
        Role::Rotate,
        Role::RotateTwice,
        Role::SwapColours,
        Role::SwapRotate,
        Role::SwapRotateTwice,
    ];

    /// Applies the role change to a product-one triple.
    pub fn apply<E: GroupElement>(&self, x: &E, y: &E, z: &E, inv: impl Fn(&E) -> E) -> (E, E, E) {
        let xy = || inv(y).mul(x).mul(y);
        match self {
            Role::Identity => (x.clone(), y.clone(), z.clone()),
            Role::Rotate => (y.clone(), z.clone(), x.clone()),
            Role::RotateTwice => (z.clone(), x.clone(), y.clone()),
            Role::SwapColours => (y.clone(), xy(), z.clone()),
            Role::SwapRotate => (xy(), z.clone(), y.clone()),
            Role::SwapRotateTwice => (z.clone(), y.clone(), xy()),
        }
    }

    /// The matching permutation of a type `(l, m, n)`.
    pub fn permute_type(&self, t: [u64; 3]) -> [u64; 3] {
        let [l, m, n] = t;
        match self {
            Role::Identity => [l, m, n],
            Role::Rotate => [m, n, l],
            Role::RotateTwice => [n, l, m],
            Role::SwapColours => [m, l, n],
            Role::SwapRotate => [l, n, m],
            Role::SwapRotateTwice => [n, m, l],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Hypermap {
    x: Permutation,
    y: Permutation,
    z: Permutation,
    counts: [usize; 3],
}

impl Hypermap {
    pub fn from_pair(x: &Permutation, y: &Permutation) -> Result<Hypermap> {
        if x.degree() != y.degree() {
            return Err(Error::DegreeMismatch(x.degree(), y.degree()));
        }
        if x.degree() == 0 {
            return Err(Error::Hypermap("empty dart set".into()));
        }
        if !transitive(x, y) {
            return Err(Error::Hypermap("⟨x, y⟩ is not transitive".into()));
        }
        let z = x.then(y).inverse();
        let counts = [x.num_cycles(), y.num_cycles(), z.num_cycles()];
        Ok(Hypermap {
            x: x.clone(),
            y: y.clone(),
            z,
            counts,
        })
    }

    pub fn size(&self) -> usize {
        self.x.degree()
    }

    pub fn x(&self) -> &Permutation {
        &self.x
    }

    pub fn y(&self) -> &Permutation {
        &self.y
    }

    pub fn z(&self) -> &Permutation {
        &self.z
    }

    pub fn hypervertices(&self) -> usize {
        self.counts[0]
    }

    pub fn hyperedges(&self) -> usize {
        self.counts[1]
    }

    pub fn hyperfaces(&self) -> usize {
        self.counts[2]
    }

    /// Orders of `x`, `y`, `z`.
    pub fn type_orders(&self) -> [u64; 3] {
        [self.x.order(), self.y.order(), self.z.order()]
    }

    /// Euler characteristic: `c(x) + c(y) + c(z) = |Ω| + 2 − 2g`.
    pub fn genus(&self) -> Result<u64> {
        let total = self.size() as i64 + 2 - self.counts.iter().sum::<usize>() as i64;
        if total < 0 || total % 2 != 0 {
            return Err(Error::Hypermap(format!("Euler defect {total} is not a non-negative even number")));
        }
        Ok((total / 2) as u64)
    }

    pub fn walsh_graph(&self) -> WalshGraph {
        let white = cycle_labels(&self.x);
        let black = cycle_labels(&self.y);
        let mut multiplicity = BTreeMap::new();
        for w in 0..self.size() {
            *multiplicity.entry((white[w], black[w])).or_insert(0) += 1;
        }
        let mut face_degrees: Vec<usize> = self.z.cycles().iter().map(|c| 2 * c.len()).collect();
        face_degrees.sort_unstable();
        WalshGraph {
            white: self.counts[0],
            black: self.counts[1],
            multiplicity,
            face_degrees,
        }
    }

    pub fn associate(&self, role: Role) -> Hypermap {
        let (a, b, _) = role.apply(&self.x, &self.y, &self.z, Permutation::inverse);
        Hypermap::from_pair(&a, &b).expect("associates stay transitive")
    }

    /// Regularity test: the automorphisms sending a base dart to its images
    /// under `x` and `y` both exist, and they generate a transitive group.
    pub fn is_regular(&self) -> bool {
        let targets = [self.x.apply(0), self.y.apply(0)];
        targets.iter().all(|&t| self.automorphism_to(t).is_some())
    }

    /// The unique automorphism sending dart 0 to `target`, if any.
    pub fn automorphism_to(&self, target: usize) -> Option<Permutation> {
        let n = self.size();
        let mut phi = vec![u32::MAX; n];
        phi[0] = target as u32;
        let mut queue = vec![0usize];
        while let Some(w) = queue.pop() {
            let image = phi[w] as usize;
            for g in [&self.x, &self.y] {
                let (next, next_image) = (g.apply(w), g.apply(image));
                if phi[next] == u32::MAX {
                    phi[next] = next_image as u32;
                    queue.push(next);
                } else if phi[next] as usize != next_image {
                    return None;
                }
            }
        }
        Permutation::from_images(phi).ok()
    }

    pub fn monodromy_group(&self) -> Result<PermGroup> {
        PermGroup::from_generators(&[self.x.clone(), self.y.clone()])
    }
}

fn transitive(x: &Permutation, y: &Permutation) -> bool {
    let n = x.degree();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(w) = stack.pop() {
        for g in [x, y] {
            let v = g.apply(w);
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Cycle index of every point, cycles numbered by least element.
fn cycle_labels(p: &Permutation) -> Vec<usize> {
    let n = p.degree();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut w = start;
        while label[w] == usize::MAX {
            label[w] = next;
            w = p.apply(w);
        }
        next += 1;
    }
    label
}

pub fn hypermap_from_pair(x: &Permutation, y: &Permutation) -> Result<Hypermap> {
    Hypermap::from_pair(x, y)
}

pub fn genus_of(h: &Hypermap) -> Result<u64> {
    h.genus()
}

pub fn walsh_graph(h: &Hypermap) -> WalshGraph {
    h.walsh_graph()
}

pub fn associate(h: &Hypermap, role: Role) -> Hypermap {
    h.associate(role)
}

pub fn is_regular(h: &Hypermap) -> bool {
    h.is_regular()
}

/// Regular hypermap on the listed group elements, `x` and `y` acting by
/// right multiplication.
pub fn regular_hypermap_from_elements<E: GroupElement>(elements: &[E], x: &E, y: &E) -> Result<Hypermap> {
    let index: HashMap<&E, u32> = elements.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
    if index.len() != elements.len() {
        return Err(Error::Hypermap("repeated group element".into()));
    }
    let translate = |g: &E| -> Result<Permutation> {
        let images = elements
            .iter()
            .map(|e| index.get(&e.mul(g)).copied().ok_or(Error::NotInGroup))
            .collect::<Result<Vec<u32>>>()?;
        Ok(Permutation::from_images_unchecked(images))
    };
    Hypermap::from_pair(&translate(x)?, &translate(y)?)
}

/// Regular hypermap of a permutation-group triple; `x, y` must generate `g`.
pub fn regular_hypermap_from_triple(g: &PermGroup, x: &Permutation, y: &Permutation) -> Result<Hypermap> {
    regular_hypermap_bounded(g, x, y, ENUMERATION_BOUND)
}

pub fn regular_hypermap_bounded(g: &PermGroup, x: &Permutation, y: &Permutation, bound: u64) -> Result<Hypermap> {
    if !g.contains(x) || !g.contains(y) {
        return Err(Error::NotInGroup);
    }
    let elements = g.elements(bound)?;
    let h = regular_hypermap_from_elements(&elements, x, y)?;
    let order = g.order().to_usize().unwrap_or(usize::MAX);
    if h.size() != order {
        return Err(Error::Hypermap("triple does not generate the group".into()));
    }
    Ok(h)
}

/// The bipartite multigraph of a hypermap: white vertices are `x`-cycles,
/// black vertices `y`-cycles, one edge per dart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalshGraph {
    pub white: usize,
    pub black: usize,
    pub multiplicity: BTreeMap<(usize, usize), usize>,
    /// Face degrees, twice the `z`-cycle lengths, sorted.
    pub face_degrees: Vec<usize>,
}

impl WalshGraph {
    pub fn edge_count(&self) -> usize {
        self.multiplicity.values().sum()
    }

    pub fn multiplicity(&self, white: usize, black: usize) -> usize {
        self.multiplicity.get(&(white, black)).copied().unwrap_or(0)
    }

    /// `m·K_{k,k}`: every white–black pair joined by exactly `m` edges.
    pub fn is_multi_complete_bipartite(&self, k: usize, m: usize) -> bool {
        self.white == k
            && self.black == k
            && (0..k).all(|w| (0..k).all(|b| self.multiplicity(w, b) == m))
    }

    /// `m·C_{2k}`: a single `2k`-cycle alternating colours, each edge of
    /// multiplicity `m`.
    pub fn is_multi_cycle(&self, k: usize, m: usize) -> bool {
        if self.white != k || self.black != k || self.multiplicity.len() != 2 * k {
            return false;
        }
        if self.multiplicity.values().any(|&v| v != m) {
            return false;
        }
        let mut white_nbrs: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut black_nbrs: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &(w, b) in self.multiplicity.keys() {
            white_nbrs[w].push(b);
            black_nbrs[b].push(w);
        }
        if white_nbrs.iter().chain(&black_nbrs).any(|v| v.len() != 2 && k > 1) {
            return false;
        }
        // walk the cycle from white 0
        let (mut w, mut prev_b, mut steps) = (0usize, usize::MAX, 0usize);
        loop {
            let b = *white_nbrs[w].iter().find(|&&b| b != prev_b).unwrap_or(&white_nbrs[w][0]);
            let next_w = *black_nbrs[b].iter().find(|&&v| v != w).unwrap_or(&w);
            steps += 1;
            prev_b = b;
            w = next_w;
            if w == 0 {
                break;
            }
            if steps > k {
                return false;
            }
        }
        steps == k
    }

    /// Edge list `white black multiplicity` after a summary header.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!(
            "# walsh white={} black={} edges={} faces={}\n",
            self.white,
            self.black,
            self.edge_count(),
            self.face_degrees.len()
        );
        for (&(w, b), &m) in &self.multiplicity {
            let _ = writeln!(out, "{w} {b} {m}");
        }
        out
    }
}

/// Number of darts of a regular model, as a machine integer when it fits.
pub fn materializable(order: &BigUint, bound: u64) -> bool {
    order.to_u64().is_some_and(|n| n <= bound)
}
