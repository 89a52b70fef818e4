//! Finite permutation groups by full element enumeration.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::GroupError;

/// Default cap on enumerated group orders.
pub const DEFAULT_MAX_ORDER: usize = 1_000_000;
const TABLE_LIMIT: usize = 1500;

/// Order cap, overridable through `ORBIKIT_MAX_GROUP_ORDER`.
pub fn max_group_order() -> usize {
    std::env::var("ORBIKIT_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

/// A permutation of `{0, .., n-1}`; printed 1-based in cycle notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u16).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: &[usize]) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(GroupError::NotBijective(images.iter().map(|x| x + 1).collect()));
            }
            seen[i] = true;
        }
        Ok(Perm(images.iter().map(|&i| i as u16).collect()))
    }

    /// From 1-based disjoint (or not) cycles, composed left to right as functions.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut p = Perm::identity(n);
        for c in cycles {
            if c.iter().any(|&x| x == 0 || x > n) {
                return Err(GroupError::Cycle(format!("{c:?} out of range 1..{n}")));
            }
            let set: BTreeSet<_> = c.iter().collect();
            if set.len() != c.len() {
                return Err(GroupError::Cycle(format!("{c:?} repeats a point")));
            }
            let mut img: Vec<usize> = (0..n).collect();
            for k in 0..c.len() {
                img[c[k] - 1] = c[(k + 1) % c.len()] - 1;
            }
            p = p.compose(&Perm::from_images(&img)?);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// 1-based cycles of length at least two.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.0[x] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// A finite permutation group with its elements enumerated in lexicographic order.
///
/// Element 0 is the identity. Products are `a ∘ b`.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens {:?})", self.degree, self.order(), self.generators)
    }
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::Degree {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let cap = max_group_order();
        let id = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if !seen.contains_key(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::OrderCap { cap });
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_keys().collect();
        elements.sort();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; n * n];
            for (i, a) in elements.iter().enumerate() {
                for (j, b) in elements.iter().enumerate() {
                    t[i * n + j] = index[&a.compose(b)] as u32;
                }
            }
            t
        });
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            table,
            inverses,
        })
    }

    /// Symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![1, 2]]).expect("valid"));
        }
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[(1..=n).collect()]).expect("valid"));
        }
        PermGroup::from_generators(n.max(1), gens).expect("symmetric group within cap")
    }

    /// Cyclic group of order `n` acting regularly.
    pub fn cyclic(n: usize) -> Self {
        let gens = if n >= 2 {
            vec![Perm::from_cycles(n, &[(1..=n).collect()]).expect("valid")]
        } else {
            vec![]
        };
        PermGroup::from_generators(n.max(1), gens).expect("cyclic group within cap")
    }

    /// The subgroup `h` as a group in its own right.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Self {
        let gens = h.gens.iter().map(|&g| self.elements[g].clone()).collect();
        PermGroup::from_generators(self.degree, gens).expect("subgroup within cap")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g⁻¹ h g`.
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn is_abelian(&self) -> bool {
        let gens: Vec<usize> = self.generators.iter().map(|g| self.index[g]).collect();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        let gens = self.generators.iter().map(|g| self.index[g]).collect();
        Subgroup {
            elems: (0..self.order()).collect(),
            gens,
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            elems: vec![0],
            gens: vec![],
        }
    }

    /// Subgroup generated by element indices.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut elems = vec![0];
        let mut k = 0;
        while k < elems.len() {
            let x = elems[k];
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    elems.push(y);
                }
            }
            k += 1;
        }
        elems.sort_unstable();
        let mut gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        Subgroup { elems, gens }
    }

    /// Subgroup generated by permutations, which must lie in the group.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<Subgroup, GroupError> {
        let idx: Result<Vec<usize>, GroupError> = gens
            .iter()
            .map(|p| {
                if p.degree() != self.degree {
                    return Err(GroupError::Degree {
                        expected: self.degree,
                        found: p.degree(),
                    });
                }
                self.index_of(p).ok_or(GroupError::NotInGroup)
            })
            .collect();
        Ok(self.generate(&idx?))
    }

    /// Subgroup from cycle notation, e.g. `&[&[&[1, 2, 3, 4]]]` for `⟨(1234)⟩`.
    pub fn subgroup_from_cycles(&self, gens: &[&[&[usize]]]) -> Result<Subgroup, GroupError> {
        let perms: Result<Vec<Perm>, GroupError> = gens
            .iter()
            .map(|g| {
                let cycles: Vec<Vec<usize>> = g.iter().map(|c| c.to_vec()).collect();
                Perm::from_cycles(self.degree, &cycles)
            })
            .collect();
        self.subgroup(&perms?)
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let mut elems: Vec<usize> = h.elems.iter().map(|&x| self.conj(x, g)).collect();
        elems.sort_unstable();
        let gens = h.gens.iter().map(|&x| self.conj(x, g)).collect();
        Subgroup { elems, gens }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let gens_h = h.generating_set();
        let elems: Vec<usize> = (0..self.order())
            .filter(|&g| gens_h.iter().all(|&x| h.contains(self.conj(x, g))))
            .collect();
        self.subgroup_from_elements(elems)
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let gens_h = h.generating_set();
        let elems: Vec<usize> = (0..self.order())
            .filter(|&g| gens_h.iter().all(|&x| self.mul(x, g) == self.mul(g, x)))
            .collect();
        self.subgroup_from_elements(elems)
    }

    /// Wraps a known-closed element set, picking a small generating set greedily.
    pub fn subgroup_from_elements(&self, elems: Vec<usize>) -> Subgroup {
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for &x in &elems {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate(&gens);
            }
        }
        debug_assert_eq!(cur.elems, elems);
        cur
    }

    pub fn is_subgroup_of(&self, h: &Subgroup, k: &Subgroup) -> bool {
        h.elems.iter().all(|&x| k.contains(x))
    }

    /// Least element of each double coset `H g K`, ascending.
    pub fn double_cosets(&self, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &a in &h.elems {
                let ag = self.mul(a, g);
                for &b in &k.elems {
                    seen[self.mul(ag, b)] = true;
                }
            }
        }
        reps
    }

    /// Size of the double coset `H g K`.
    pub fn double_coset_size(&self, h: &Subgroup, g: usize, k: &Subgroup) -> usize {
        let mut set = BTreeSet::new();
        for &a in &h.elems {
            let ag = self.mul(a, g);
            for &b in &k.elems {
                set.insert(self.mul(ag, b));
            }
        }
        set.len()
    }

    /// Least element of each left coset `gK`, ascending.
    pub fn left_coset_reps(&self, k: &Subgroup) -> Vec<usize> {
        let nf = self.left_coset_normal_forms(k);
        let mut reps: Vec<usize> = nf.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// For every element `g`, the least element of `gK`.
    pub fn left_coset_normal_forms(&self, k: &Subgroup) -> Vec<usize> {
        let mut nf = vec![usize::MAX; self.order()];
        for g in 0..self.order() {
            if nf[g] != usize::MAX {
                continue;
            }
            // g is the least element of its coset because we scan ascending.
            for &x in &k.elems {
                nf[self.mul(g, x)] = g;
            }
        }
        nf
    }

    /// Some `g` with `g⁻¹ A g = B`.
    pub fn conjugating_element(&self, a: &Subgroup, b: &Subgroup) -> Option<usize> {
        if a.order() != b.order() {
            return None;
        }
        let gens = a.generating_set();
        (0..self.order()).find(|&g| gens.iter().all(|&x| b.contains(self.conj(x, g))))
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        self.conjugating_element(a, b).is_some()
    }

    /// Some `g` with `g⁻¹ A g ≤ B`.
    pub fn subconjugating_element(&self, a: &Subgroup, b: &Subgroup) -> Option<usize> {
        if b.order() % a.order() != 0 {
            return None;
        }
        let gens = a.generating_set();
        (0..self.order()).find(|&g| gens.iter().all(|&x| b.contains(self.conj(x, g))))
    }

    /// The lexicographically least conjugate and a witness `g` with `g⁻¹ H g` equal to it.
    pub fn canonical_conjugate(&self, h: &Subgroup) -> (Subgroup, usize) {
        let mut best: Option<(Vec<usize>, usize)> = None;
        for g in 0..self.order() {
            let mut e: Vec<usize> = h.elems.iter().map(|&x| self.conj(x, g)).collect();
            e.sort_unstable();
            if best.as_ref().map_or(true, |(b, _)| e < *b) {
                best = Some((e, g));
            }
        }
        let (elems, g) = best.expect("nonempty group");
        (self.subgroup_from_elements(elems), g)
    }

    /// All subgroups of `h`, each once, sorted by (order, elements).
    pub fn subgroups_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut cyclic: Vec<Subgroup> = Vec::new();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &x in &h.elems {
            let c = self.generate(&[x]);
            if seen.insert(c.elems.clone()) {
                cyclic.push(c);
            }
        }
        let mut all: Vec<Subgroup> = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for c in &cyclic {
                    let x = c.gens.first().copied().unwrap_or(0);
                    if a.contains(x) {
                        continue;
                    }
                    let mut gens = a.gens.clone();
                    gens.push(x);
                    let s = self.generate(&gens);
                    if seen.insert(s.elems.clone()) {
                        next.push(s.clone());
                        all.push(s);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));
        all
    }

    /// A Sylow `p`-subgroup.
    pub fn sylow(&self, p: usize) -> Subgroup {
        let mut cur = self.trivial();
        loop {
            let n = self.normalizer(&cur);
            let ext = n.elems.iter().copied().find(|&x| {
                !cur.contains(x) && {
                    let mut y = x;
                    for _ in 1..p {
                        y = self.mul(y, x);
                    }
                    cur.contains(y)
                }
            });
            match ext {
                Some(x) => {
                    let mut gens = cur.gens.clone();
                    gens.push(x);
                    cur = self.generate(&gens);
                }
                None => return cur,
            }
        }
    }

    /// `N_G(H)/H` as a permutation group on the cosets of `H` in `N_G(H)`.
    ///
    /// Returns the group together with the least element of each coset, in point order.
    pub fn weyl_group(&self, h: &Subgroup) -> (PermGroup, Vec<usize>) {
        let n = self.normalizer(h);
        let nf = self.left_coset_normal_forms(h);
        let mut points: Vec<usize> = n.elems.iter().map(|&x| nf[x]).collect();
        points.sort_unstable();
        points.dedup();
        let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let act = |x: usize| {
            let img: Vec<usize> = points.iter().map(|&c| pos[&nf[self.mul(x, c)]]).collect();
            Perm::from_images(&img).expect("coset action is bijective")
        };
        let gens: Vec<Perm> = n.gens.iter().map(|&x| act(x)).filter(|p| !p.is_identity()).collect();
        let deg = points.len();
        (PermGroup::from_generators(deg, gens).expect("Weyl group within cap"), points)
    }
}

/// A subgroup of a parent group, stored as its sorted element indices.
///
/// Equality and ordering are by element set, so the lexicographic order on sorted
/// element lists is the order used to pick canonical representatives.
#[derive(Clone)]
pub struct Subgroup {
    elems: Vec<usize>,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        self.elems == o.elems
    }
}
impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens {:?})", self.elems.len(), self.gens)
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Generators, falling back to all elements when none were recorded.
    fn generating_set(&self) -> Vec<usize> {
        if self.gens.is_empty() && self.elems.len() > 1 {
            self.elems.clone()
        } else {
            self.gens.clone()
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn generator_perms(&self, g: &PermGroup) -> Vec<Perm> {
        self.gens.iter().map(|&x| g.element(x).clone()).collect()
    }

    pub fn intersect(&self, g: &PermGroup, o: &Subgroup) -> Subgroup {
        let elems: Vec<usize> = self.elems.iter().copied().filter(|&x| o.contains(x)).collect();
        g.subgroup_from_elements(elems)
    }

    /// Ordering used for objects: increasing order, ties by element list.
    pub fn object_key(&self) -> (usize, &[usize]) {
        (self.elems.len(), &self.elems)
    }
}

/// A family of subgroups closed under conjugation and subgroups, by class representatives.
pub struct Family {
    reps: Vec<Subgroup>,
    members: OnceLock<Vec<Subgroup>>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.reps.iter().map(Subgroup::order)).finish()
    }
}

impl Clone for Family {
    fn clone(&self) -> Self {
        Family {
            reps: self.reps.clone(),
            members: OnceLock::new(),
        }
    }
}

impl Family {
    /// Smallest family containing the seeds.
    pub fn generate(g: &PermGroup, seeds: &[Subgroup]) -> Family {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = vec![g.trivial()];
        found.insert(vec![0]);
        for s in seeds {
            for h in g.subgroups_of(s) {
                let (c, _) = g.canonical_conjugate(&h);
                if found.insert(c.elems.clone()) {
                    reps.push(c);
                }
            }
        }
        reps.sort_by(|a, b| a.object_key().cmp(&b.object_key()));
        Family {
            reps,
            members: OnceLock::new(),
        }
    }

    /// Every subgroup of `g` satisfying a conjugation-invariant, subgroup-closed predicate.
    pub fn from_predicate(g: &PermGroup, pred: impl Fn(&Subgroup) -> bool) -> Family {
        let seeds: Vec<Subgroup> = g.subgroups_of(&g.whole()).into_iter().filter(|h| pred(h)).collect();
        Family::generate(g, &seeds)
    }

    /// All subgroups of prime-power order for the given primes.
    pub fn p_subgroups(g: &PermGroup, primes: &[usize]) -> Family {
        Family::from_predicate(g, |h| primes.iter().any(|&p| is_power_of(h.order(), p)))
    }

    pub fn class_reps(&self) -> &[Subgroup] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index of the class containing `h`, with a witness `g` such that `g⁻¹ h g` is the representative.
    pub fn class_of(&self, g: &PermGroup, h: &Subgroup) -> Option<(usize, usize)> {
        self.reps
            .iter()
            .enumerate()
            .filter(|(_, r)| r.order() == h.order())
            .find_map(|(i, r)| g.conjugating_element(h, r).map(|w| (i, w)))
    }

    pub fn contains(&self, g: &PermGroup, h: &Subgroup) -> bool {
        self.class_of(g, h).is_some()
    }

    /// All members, materialized on first use.
    pub fn members(&self, g: &PermGroup) -> &[Subgroup] {
        self.members.get_or_init(|| {
            let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
            let mut out = Vec::new();
            for r in &self.reps {
                for x in 0..g.order() {
                    let c = g.conjugate(r, x);
                    if set.insert(c.elems.clone()) {
                        out.push(c);
                    }
                }
            }
            out
        })
    }
}

pub fn is_power_of(mut n: usize, p: usize) -> bool {
    while n % p == 0 && n > 1 {
        n /= p;
    }
    n == 1
}
