//! Lubotzky–Phillips–Sarnak Cayley graphs `X^{p,q}`.
//!
//! Generators come from the integer quaternions `a + bi + cj + dk` of norm `p`
//! with `a > 0` odd and `b, c, d` even, sent to `PGL_2(F_q)` through
//! `[[a + xb + yd, c - yb + xd], [-c - yb + xd, a - xb - yd]]` where
//! `x^2 + y^2 = -1 (mod q)`. For `q = 1 (mod 4)` we take `y = 0` and `x = ι`
//! the smallest square root of `-1`, which gives the familiar
//! `[[a + ιb, c + ιd], [-c + ιd, a - ιb]]`.
//! When `p` is a square mod `q` the generators have square determinant and the
//! graph lives on `PSL_2(F_q)`; otherwise on all of `PGL_2(F_q)`, and is
//! bipartite.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::GenError;
use crate::graph::Graph;

type Mat = [u32; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpsParams {
    p: u64,
    q: u64,
    legendre: i8,
}

impl LpsParams {
    pub fn new(p: u64, q: u64) -> Result<Self, GenError> {
        for (name, v) in [("p", p), ("q", q)] {
            if !is_prime(v) {
                return Err(GenError::InvalidParams(format!(
                    "{name} = {v} is not prime"
                )));
            }
        }
        if p % 4 != 1 {
            return Err(GenError::InvalidParams(format!("p = {p} is not 1 mod 4")));
        }
        if q == 2 {
            return Err(GenError::InvalidParams("q must be odd".into()));
        }
        if p == q {
            return Err(GenError::InvalidParams(format!(
                "p and q must differ (both {p})"
            )));
        }
        if q * q <= 4 * p {
            return Err(GenError::InvalidParams(format!(
                "q = {q} must exceed 2*sqrt(p)"
            )));
        }
        if q > 1 << 15 {
            return Err(GenError::InvalidParams(format!("q = {q} is too large")));
        }
        let legendre = if pow_mod(p % q, (q - 1) / 2, q) == 1 {
            1
        } else {
            -1
        };
        Ok(LpsParams { p, q, legendre })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Legendre symbol `(p | q)`.
    pub fn legendre(&self) -> i8 {
        self.legendre
    }

    /// Order of the vertex group.
    pub fn vertex_count(&self) -> usize {
        let q = self.q as usize;
        let pgl = q * (q * q - 1);
        if self.legendre == 1 {
            pgl / 2
        } else {
            pgl
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Quaternions `(a, b, c, d)` with `a^2 + b^2 + c^2 + d^2 = p`, `a > 0` odd and
/// `b, c, d` even, in lexicographic order. For `p = 1 (mod 4)` prime there are
/// exactly `p + 1` of them.
pub fn quaternion_solutions(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let mut r = 0;
    while (r + 1) * (r + 1) <= p {
        r += 1;
    }
    let r = r + 1;
    let mut out = Vec::new();
    for a in (1..=r).step_by(2) {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if b % 2 == 0 && c % 2 == 0 && d % 2 == 0 && a * a + b * b + c * c + d * d == p
                    {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

struct Field {
    q: u32,
    /// Smallest square root of each quadratic residue, 0 for non-residues.
    sqrt: Vec<u32>,
}

impl Field {
    fn new(q: u32) -> Self {
        let mut sqrt = vec![0; q as usize];
        for x in (1..q).rev() {
            sqrt[(x as u64 * x as u64 % q as u64) as usize] = x;
        }
        Field { q, sqrt }
    }

    /// `(x, y)` with `x^2 + y^2 = -1`: `y = 0` and the smallest `x` when `-1` is
    /// a square, else the lexicographically smallest pair.
    fn minus_one_as_two_squares(&self) -> (u32, u32) {
        let q = self.q;
        if let Some(x) = (1..q).find(|&x| self.mul(x, x) == q - 1) {
            return (x, 0);
        }
        for x in 1..q {
            let rest = self.sub(q - 1, self.mul(x, x));
            let y = self.sqrt[rest as usize];
            if y != 0 {
                return (x, y);
            }
        }
        unreachable!("every element of F_q is a sum of two squares")
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.q as u64) as u32
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    fn inv(&self, a: u32) -> u32 {
        pow_mod(a as u64, self.q as u64 - 2, self.q as u64) as u32
    }

    fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    fn mat_mul(&self, x: &Mat, y: &Mat) -> Mat {
        [
            self.add(self.mul(x[0], y[0]), self.mul(x[1], y[2])),
            self.add(self.mul(x[0], y[1]), self.mul(x[1], y[3])),
            self.add(self.mul(x[2], y[0]), self.mul(x[3], y[2])),
            self.add(self.mul(x[2], y[1]), self.mul(x[3], y[3])),
        ]
    }

    fn det(&self, m: &Mat) -> u32 {
        self.sub(self.mul(m[0], m[3]), self.mul(m[1], m[2]))
    }

    fn scale(&self, m: &Mat, s: u32) -> Mat {
        [
            self.mul(m[0], s),
            self.mul(m[1], s),
            self.mul(m[2], s),
            self.mul(m[3], s),
        ]
    }

    /// `PGL_2` key: first nonzero entry (row-major) scaled to 1.
    fn canon_pgl(&self, m: &Mat) -> Mat {
        let lead = m
            .iter()
            .copied()
            .find(|&e| e != 0)
            .expect("invertible matrix");
        self.scale(m, self.inv(lead))
    }

    /// `PSL_2` key: determinant scaled to 1, then the sign fixed so the first
    /// nonzero entry lies in `1..=(q-1)/2`.
    fn canon_psl(&self, m: &Mat) -> Option<Mat> {
        let root = self.sqrt[self.inv(self.det(m)) as usize];
        if root == 0 {
            return None;
        }
        let mut out = self.scale(m, root);
        let lead = out
            .iter()
            .copied()
            .find(|&e| e != 0)
            .expect("invertible matrix");
        if lead > (self.q - 1) / 2 {
            out = self.scale(&out, self.q - 1);
        }
        Some(out)
    }
}

fn label(m: &Mat) -> String {
    format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
}

/// Builds the `(p + 1)`-regular LPS graph. Vertices are the group elements in
/// lexicographic order of their canonical matrices; `x ~ x * s` for each
/// generator `s`. Labels carry the canonical matrices.
pub fn gen_lps(params: LpsParams) -> Result<Graph, GenError> {
    let field = Field::new(params.q as u32);
    let (x, y) = field.minus_one_as_two_squares();
    let (x, y) = (x as i64, y as i64);
    let psl = params.legendre == 1;
    let canon = |m: &Mat| -> Result<Mat, GenError> {
        if psl {
            field.canon_psl(m).ok_or_else(|| {
                GenError::InvalidParams(format!("element {} has non-square determinant", label(m)))
            })
        } else {
            Ok(field.canon_pgl(m))
        }
    };

    let mut gens: Vec<Mat> = Vec::new();
    for [a, b, c, d] in quaternion_solutions(params.p) {
        let m = [
            field.reduce(a + x * b + y * d),
            field.reduce(c - y * b + x * d),
            field.reduce(-c - y * b + x * d),
            field.reduce(a - x * b - y * d),
        ];
        let key = canon(&m)?;
        if !gens.contains(&key) {
            gens.push(key);
        }
    }
    let degree = params.p as usize + 1;
    if gens.len() != degree {
        return Err(GenError::GeneratorCount {
            found: gens.len(),
            expected: degree,
        });
    }
    let identity = canon(&[1, 0, 0, 1])?;
    for g in &gens {
        let closed = gens
            .iter()
            .any(|h| canon(&field.mat_mul(g, h)) == Ok(identity));
        if !closed {
            return Err(GenError::InvalidParams(format!(
                "generator {} has no inverse in the set",
                label(g)
            )));
        }
    }

    // breadth-first enumeration of the group from the identity
    let mut index: BTreeMap<Mat, usize> = BTreeMap::new();
    let mut elems = vec![identity];
    let mut arcs: Vec<Vec<usize>> = vec![Vec::with_capacity(degree)];
    index.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let x = elems[i];
        for g in &gens {
            let y = canon(&field.mat_mul(&x, g))?;
            let j = *index.entry(y).or_insert_with(|| {
                elems.push(y);
                arcs.push(Vec::with_capacity(degree));
                queue.push_back(elems.len() - 1);
                elems.len() - 1
            });
            arcs[i].push(j);
        }
    }
    let expected = params.vertex_count();
    if elems.len() != expected {
        return Err(GenError::NotConnected {
            reached: elems.len(),
            expected,
        });
    }

    // relabel by sorted matrix order (BTreeMap iterates in key order)
    let mut rank = vec![0usize; elems.len()];
    for (new, &old) in index.values().enumerate() {
        rank[old] = new;
    }
    let mut lists = vec![Vec::new(); elems.len()];
    for (old, out) in arcs.into_iter().enumerate() {
        lists[rank[old]] = out.into_iter().map(|j| rank[j]).collect();
    }
    let labels = index.keys().map(label).collect();
    let graph = Graph::from_neighbor_lists(lists)?
        .with_labels(labels)?
        .with_homogeneous(true);
    if !graph.is_connected() {
        return Err(GenError::NotConnected {
            reached: graph.bfs_distances(0).reached(),
            expected,
        });
    }
    Ok(graph)
}
