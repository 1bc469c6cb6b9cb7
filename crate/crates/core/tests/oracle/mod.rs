//! Independent reference computations, written directly from the
//! definitions and sharing no code with the library.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;

/// A framework as attacker lists.
#[derive(Debug, Clone)]
pub struct Naive {
    pub n: usize,
    pub attackers: Vec<Vec<usize>>,
}

impl Naive {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut attackers = vec![Vec::new(); n];
        for &(x, y) in edges {
            if !attackers[y].contains(&x) {
                attackers[y].push(x);
            }
        }
        for a in &mut attackers {
            a.sort_unstable();
        }
        Naive { n, attackers }
    }

    pub fn attacks(&self, x: usize, y: usize) -> bool {
        self.attackers[y].contains(&x)
    }

    /// `{a : every attacker of a is attacked by s}`.
    pub fn defended(&self, s: &[bool]) -> Vec<bool> {
        (0..self.n)
            .map(|a| {
                self.attackers[a]
                    .iter()
                    .all(|&b| self.attackers[b].iter().any(|&c| s[c]))
            })
            .collect()
    }

    /// Stage at which each argument enters, by iterating from the empty set.
    pub fn stages(&self) -> Vec<Option<u64>> {
        let mut stage = vec![None; self.n];
        let mut s = vec![false; self.n];
        for k in 1.. {
            let next = self.defended(&s);
            if next == s {
                break;
            }
            for a in 0..self.n {
                if next[a] && stage[a].is_none() {
                    stage[a] = Some(k);
                }
            }
            s = next;
        }
        stage
    }

    pub fn grounded(&self) -> Vec<bool> {
        self.stages().iter().map(Option::is_some).collect()
    }

    /// Number of strict increases before the iteration stops.
    pub fn grounding_ordinal(&self) -> u64 {
        self.stages().iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn plus(&self, s: &[bool]) -> Vec<bool> {
        (0..self.n)
            .map(|y| self.attackers[y].iter().any(|&x| s[x]))
            .collect()
    }

    pub fn grounded_plus(&self) -> Vec<bool> {
        self.plus(&self.grounded())
    }

    fn mask_set(&self, mask: u32) -> Vec<bool> {
        (0..self.n).map(|i| mask >> i & 1 == 1).collect()
    }

    /// Least fixpoint of the defence function by inclusion, found by testing
    /// every subset.
    pub fn brute_least_fixpoint(&self) -> Vec<bool> {
        assert!(self.n <= 20);
        let fixpoints: Vec<u32> = (0u32..1 << self.n)
            .filter(|&m| {
                let s = self.mask_set(m);
                self.defended(&s) == s
            })
            .collect();
        let least = fixpoints
            .iter()
            .copied()
            .find(|&m| fixpoints.iter().all(|&f| m & f == m))
            .expect("some fixpoint is below all others");
        self.mask_set(least)
    }

    /// Union of every `s` with `s` contained in `defended(s)`.
    pub fn brute_largest_self_defending(&self) -> Vec<bool> {
        assert!(self.n <= 20);
        let mut union = 0u32;
        for m in 0u32..1 << self.n {
            let s = self.mask_set(m);
            let d = self.defended(&s);
            if (0..self.n).all(|i| !s[i] || d[i]) {
                union |= m;
            }
        }
        self.mask_set(union)
    }

    pub fn conflict_free(&self, s: &[bool]) -> bool {
        (0..self.n).all(|y| !s[y] || self.attackers[y].iter().all(|&x| !s[x]))
    }
}

pub fn random_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let p: f64 = rng.gen_range(0.05..0.4);
    let mut edges = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(p) {
                edges.push((x, y));
            }
        }
    }
    edges
}

/// Inverse of `(x,y) -> (x+y)(x+y+1)/2 + y`, by search.
pub fn unpair(z: u64) -> (u64, u64) {
    let mut s = 0u64;
    while (s + 1) * (s + 2) / 2 <= z {
        s += 1;
    }
    let y = z - s * (s + 1) / 2;
    (s - y, y)
}

/// The set committed to along `sigma` in `T_S`.
pub fn ts_mran(s: &[usize], sigma: &[u64]) -> Vec<usize> {
    let mut m: Vec<usize> = s.to_vec();
    for &x in sigma {
        if x >= 1 {
            m.push(x as usize - 1);
        }
    }
    m.sort_unstable();
    m.dedup();
    m
}

/// Allowed symbols at the next level after `sigma`.
pub fn ts_next(af: &Naive, s: &[usize], sigma: &[u64]) -> Vec<u64> {
    let level = sigma.len() as u64;
    let (target, _) = unpair(level);
    let mran = ts_mran(s, sigma);
    let t = target as usize;
    if t < af.n && mran.iter().any(|&m| af.attacks(t, m)) {
        af.attackers[t].iter().map(|&i| i as u64 + 1).collect()
    } else {
        vec![0]
    }
}

pub fn ts_member(af: &Naive, s: &[usize], sigma: &[u64]) -> bool {
    (0..sigma.len()).all(|l| ts_next(af, s, &sigma[..l]).contains(&sigma[l]))
}

/// Height of `T_S`, or `None` if more than `budget` distinct states are
/// met or some branch passes level 10000. The subtree below a node depends only on its level and the set it
/// has committed to, so heights are memoised on that pair.
pub fn ts_height(af: &Naive, s: &[usize], budget: usize) -> Option<u64> {
    let mut memo = HashMap::new();
    height_from(af, 0, ts_mran(s, &[]), &mut memo, budget)
}

fn height_from(
    af: &Naive,
    level: u64,
    mran: Vec<usize>,
    memo: &mut HashMap<(u64, Vec<usize>), u64>,
    budget: usize,
) -> Option<u64> {
    if let Some(&h) = memo.get(&(level, mran.clone())) {
        return Some(h);
    }
    if memo.len() >= budget || level > 10_000 {
        return None;
    }
    let (target, _) = unpair(level);
    let t = target as usize;
    let h = if t < af.n && mran.iter().any(|&m| af.attacks(t, m)) {
        let mut best = 0;
        for &i in &af.attackers[t] {
            let mut next = mran.clone();
            if !next.contains(&i) {
                next.push(i);
                next.sort_unstable();
            }
            best = best.max(height_from(af, level + 1, next, memo, budget)? + 1);
        }
        best
    } else {
        // The single child 0 keeps the committed set. An infinite run of
        // these is cut off by the level bound.
        height_from(af, level + 1, mran.clone(), memo, budget)? + 1
    };
    memo.insert((level, mran), h);
    Some(h)
}

pub fn ta_member(af: &Naive, a: usize, sigma: &[u64]) -> bool {
    match sigma.split_first() {
        None => true,
        Some((&i, rest)) => {
            (i as usize) < af.n && af.attacks(i as usize, a) && ts_member(af, &[i as usize], rest)
        }
    }
}

pub fn ta_mran(sigma: &[u64]) -> Vec<usize> {
    match sigma.split_first() {
        None => Vec::new(),
        Some((&i, rest)) => ts_mran(&[i as usize], rest),
    }
}

/// Height of `T^a`.
pub fn ta_height(af: &Naive, a: usize, budget: usize) -> Option<u64> {
    let mut best = 0;
    for &i in &af.attackers[a] {
        best = best.max(ts_height(af, &[i], budget)? + 1);
    }
    Some(best)
}

/// Parent-pointer trees: node `k > 0` hangs below a uniformly chosen earlier
/// node. Returns node paths in creation order, root first.
pub fn random_tree_paths(rng: &mut impl Rng, max_nodes: usize) -> Vec<Vec<u64>> {
    let size = rng.gen_range(1..=max_nodes);
    let mut paths: Vec<Vec<u64>> = vec![Vec::new()];
    let mut kids = vec![0u64];
    for _ in 1..size {
        let p = rng.gen_range(0..paths.len());
        let mut c = paths[p].clone();
        c.push(kids[p]);
        kids[p] += 1;
        paths.push(c);
        kids.push(0);
    }
    paths
}

/// Rank of each node: 0 for leaves, else one more than the largest child
/// rank. Paths must be prefix closed.
pub fn tree_ranks(paths: &[Vec<u64>]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(paths[i].len()));
    let mut rank = vec![0u64; paths.len()];
    for &i in &order {
        for (j, q) in paths.iter().enumerate() {
            if q.len() == paths[i].len() + 1 && q.starts_with(&paths[i]) {
                rank[i] = rank[i].max(rank[j] + 1);
            }
        }
    }
    rank
}

/// Ordinals below `w^w` as coefficient vectors, index = exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf(pub Vec<u64>);

impl Cnf {
    pub fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let len = rng.gen_range(0..5);
        Cnf((0..len)
            .map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(1..6) })
            .collect())
        .trim()
    }

    pub fn text(&self) -> String {
        let mut parts = Vec::new();
        for (e, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let base = match e {
                0 => None,
                1 => Some("w".to_string()),
                _ => Some(format!("w^{e}")),
            };
            parts.push(match (base, c) {
                (None, c) => c.to_string(),
                (Some(b), 1) => b,
                (Some(b), c) => format!("{b}*{c}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Lexicographic from the top exponent.
    pub fn cmp(&self, other: &Cnf) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }

    /// `self + other`: terms of `self` below the leading exponent of `other`
    /// are absorbed.
    pub fn add(&self, other: &Cnf) -> Cnf {
        let Some(top) = other.0.len().checked_sub(1) else {
            return self.clone();
        };
        let mut out = other.0.clone();
        if self.0.len() > top {
            out[top] += self.0[top];
            out.extend_from_slice(&self.0[top + 1..]);
        }
        Cnf(out).trim()
    }

    pub fn is_limit(&self) -> bool {
        !self.0.is_empty() && self.0[0] == 0
    }

    /// `g + w^(e+1)` maps to `g + w^e * i`.
    pub fn fundamental(&self, i: u64) -> Cnf {
        let e = self.0.iter().position(|&c| c > 0).expect("nonzero");
        let mut out = self.0.clone();
        out[e] -= 1;
        out[e - 1] += i;
        Cnf(out).trim()
    }
}
