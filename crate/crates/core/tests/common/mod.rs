//! Test support: an independent coset enumerator used as an order oracle,
//! multiplication tables of all groups of order at most 8, and seeded
//! generators of random presentations and bands.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use igband::band::Band;
use igband::presentations::{CayleyFormPresentation, GroupPresentation, Letter, Word};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Order of the group presented by `p`, by a union-find coset enumeration
/// written separately from the library's. `None` past `limit` cosets.
pub fn oracle_order(p: &GroupPresentation, limit: usize) -> Option<usize> {
    let ng = p.num_generators();
    let cols = 2 * ng;
    let col = |l: &Letter| 2 * l.gen + usize::from(l.inverse);
    let inv = |c: usize| c ^ 1;
    let relators: Vec<Vec<usize>> = p.relations.iter().map(|r| r.relator().free_reduce().letters().iter().map(col).collect()).collect();

    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; cols]];
    let mut parent: Vec<usize> = vec![0];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    fn merge(table: &mut [Vec<Option<usize>>], parent: &mut [usize], a: usize, b: usize) {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (find(parent, a), find(parent, b));
            if a == b {
                continue;
            }
            let (a, b) = (a.min(b), a.max(b));
            parent[b] = a;
            for x in 0..table[b].len() {
                if let Some(t) = table[b][x] {
                    match table[a][x] {
                        Some(s) => queue.push((s, t)),
                        None => table[a][x] = Some(t),
                    }
                }
            }
        }
    }

    loop {
        let mut changed = false;
        let mut c = 0;
        while c < table.len() {
            if find(&mut parent, c) != c {
                c += 1;
                continue;
            }
            for r in &relators {
                if find(&mut parent, c) != c {
                    break;
                }
                let mut cur = c;
                for &x in r {
                    let cur_root = find(&mut parent, cur);
                    let next = match table[cur_root][x] {
                        Some(t) => find(&mut parent, t),
                        None => {
                            if table.len() >= limit {
                                return None;
                            }
                            let n = table.len();
                            table.push(vec![None; cols]);
                            parent.push(n);
                            table[cur_root][x] = Some(n);
                            table[n][inv(x)] = Some(cur_root);
                            changed = true;
                            n
                        }
                    };
                    cur = next;
                }
                if find(&mut parent, cur) != find(&mut parent, c) {
                    merge(&mut table, &mut parent, cur, c);
                    changed = true;
                }
            }
            if find(&mut parent, c) == c {
                for x in 0..cols {
                    let t = table[c][x];
                    match t {
                        None => {
                            if table.len() >= limit {
                                return None;
                            }
                            let n = table.len();
                            table.push(vec![None; cols]);
                            parent.push(n);
                            table[c][x] = Some(n);
                            table[n][inv(x)] = Some(c);
                            changed = true;
                        }
                        Some(t) => {
                            // the inverse entry must point back
                            let t = find(&mut parent, t);
                            match table[t][inv(x)] {
                                Some(s) if find(&mut parent, s) != c => {
                                    merge(&mut table, &mut parent, s, c);
                                    changed = true;
                                }
                                None => {
                                    table[t][inv(x)] = Some(c);
                                    changed = true;
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
            c += 1;
        }
        if !changed {
            let live: HashSet<usize> = (0..table.len()).map(|x| find(&mut parent, x)).collect();
            return Some(live.len());
        }
    }
}

/// A finite group as a multiplication table with identity 0.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub name: &'static str,
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn is_group(&self) -> bool {
        let n = self.order();
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul[self.mul[a][b]][c] == self.mul[a][self.mul[b][c]])));
        let ident = (0..n).all(|a| self.mul[0][a] == a && self.mul[a][0] == a);
        let inverses = (0..n).all(|a| (0..n).any(|b| self.mul[a][b] == 0));
        assoc && ident && inverses
    }

    /// Sorted element orders, with commutativity: enough to tell the
    /// groups of order at most 8 apart.
    pub fn invariant(&self) -> (usize, bool, Vec<usize>) {
        let n = self.order();
        let mut orders: Vec<usize> = (0..n)
            .map(|a| {
                let (mut x, mut k) = (a, 1);
                while x != 0 {
                    x = self.mul[x][a];
                    k += 1;
                }
                k
            })
            .collect();
        orders.sort();
        let abelian = (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]));
        (n, abelian, orders)
    }

    /// Generators `g0 ... g{n-1}` and one relation `gi gj = g(ij)` per pair.
    pub fn cayley_presentation(&self) -> CayleyFormPresentation {
        let n = self.order();
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in 0..n {
                triples.push((names[i].clone(), names[j].clone(), names[self.mul[i][j]].clone()));
            }
        }
        CayleyFormPresentation::from_names(&names, &triples).unwrap()
    }
}

pub fn cyclic(name: &'static str, n: usize) -> GroupTable {
    GroupTable { name, mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
}

pub fn product(name: &'static str, g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (m, n) = (g.order(), h.order());
    let mul = (0..m * n).map(|x| (0..m * n).map(|y| g.mul[x / n][y / n] * n + h.mul[x % n][y % n]).collect()).collect();
    GroupTable { name, mul }
}

/// Dihedral group of order `2n`: `(i, e)` stands for `r^i s^e`.
pub fn dihedral(name: &'static str, n: usize) -> GroupTable {
    let enc = |i: usize, e: usize| e * n + i;
    let mut mul = vec![vec![0; 2 * n]; 2 * n];
    for i in 0..n {
        for e in 0..2 {
            for j in 0..n {
                for f in 0..2 {
                    let k = if e == 0 { (i + j) % n } else { (i + n - j) % n };
                    mul[enc(i, e)][enc(j, f)] = enc(k, (e + f) % 2);
                }
            }
        }
    }
    GroupTable { name, mul }
}

/// Quaternion group: `4s + u` stands for `(-1)^s u`, `u` in `1, i, j, k`.
pub fn quaternion() -> GroupTable {
    // unit products (sign, unit)
    let units = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut mul = vec![vec![0; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let (s, u) = units[x % 4][y % 4];
            mul[x][y] = 4 * ((x / 4 + y / 4 + s) % 2) + u;
        }
    }
    GroupTable { name: "Q8", mul }
}

/// One representative of every isomorphism class of groups of order at
/// most 8.
pub fn small_groups() -> Vec<GroupTable> {
    let z2 = cyclic("Z2", 2);
    let z4 = cyclic("Z4", 4);
    vec![
        cyclic("Z1", 1),
        z2.clone(),
        cyclic("Z3", 3),
        z4.clone(),
        product("Z2xZ2", &z2, &z2),
        cyclic("Z5", 5),
        cyclic("Z6", 6),
        dihedral("S3", 3),
        cyclic("Z7", 7),
        cyclic("Z8", 8),
        product("Z4xZ2", &z4, &z2),
        product("Z2xZ2xZ2", &product("Z2xZ2", &z2, &z2), &z2),
        dihedral("D4", 4),
        quaternion(),
    ]
}

const LETTERS: [&str; 5] = ["a", "b", "c", "d", "e"];

/// Random Cayley-form presentation with `n` generators and up to `r`
/// distinct relations.
pub fn random_cayley(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CayleyFormPresentation {
    let names = &LETTERS[..n];
    let mut seen = BTreeSet::new();
    let mut triples = Vec::new();
    let target = r.min(n * n * n);
    while triples.len() < target {
        let t = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        if seen.insert(t) {
            triples.push((names[t.0], names[t.1], names[t.2]));
        }
    }
    CayleyFormPresentation::from_names(names, &triples).unwrap()
}

/// Random word of the given length over `n` generators.
pub fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Word {
    (0..len).map(|_| Letter { gen: rng.gen_range(0..n), inverse: rng.gen_bool(0.5) }).collect()
}

/// Family of subsets of `0..k` closed under intersection, generated by a
/// few random sets.
fn random_meet_family(rng: &mut ChaCha8Rng, k: usize, gens: usize) -> Vec<BTreeSet<usize>> {
    let mut family: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    family.insert((0..k).collect());
    for _ in 0..gens {
        family.insert((0..k).filter(|_| rng.gen_bool(0.5)).collect());
    }
    loop {
        let v: Vec<_> = family.iter().cloned().collect();
        let before = family.len();
        for a in &v {
            for b in &v {
                family.insert(a.intersection(b).copied().collect());
            }
        }
        if family.len() == before {
            return v;
        }
    }
}

/// A random band with at most `max` elements, presented only by its table.
pub fn random_table_band(rng: &mut ChaCha8Rng, max: usize, source: &Band) -> Band {
    loop {
        let b = match rng.gen_range(0..4) {
            0 => {
                let m = rng.gen_range(1..=4);
                let n = rng.gen_range(1..=4);
                let gens = rng.gen_range(1..=3);
                let fam = random_meet_family(rng, 3, gens);
                Band::direct_product(&Band::rectangular(m, n), &Band::semilattice(&fam).unwrap())
            }
            1 => {
                let gens = rng.gen_range(2..=6);
                Band::semilattice(&random_meet_family(rng, 5, gens)).unwrap()
            }
            2 => {
                let mut elems: Vec<usize> = (0..source.len()).collect();
                elems.shuffle(rng);
                let k = rng.gen_range(2..=5);
                source.generated_by(&elems[..k]).0
            }
            _ => {
                let fam = random_meet_family(rng, 2, 2);
                let left = Band::direct_product(&Band::rectangular(rng.gen_range(1..=3), 1), &Band::semilattice(&fam).unwrap());
                Band::direct_product(&left, &Band::rectangular(1, rng.gen_range(1..=3)))
            }
        };
        if b.len() <= max && b.len() > 1 {
            return Band::from_table(b.rows()).unwrap();
        }
    }
}
