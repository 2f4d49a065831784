//! Finite tolerance modules and the brute-force dimension oracle.
//!
//! A module lives on a finite ambient: a product of cyclic groups, or the
//! integers truncated to `[-n, n]`. A signed sum of elements exists only
//! when the total mass of its terms stays within `mass_bound`, and two
//! elements `x, y` are related when `cost(x - y) <= tol`.
//!
//! The dimension is the least size of a set `F` such that (1) distinct
//! members of `F` are unrelated and (2) every element is related to some
//! existing `sum a_f f` with `a in {-1, 0, 1}^F`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, parse_rational};

pub const MAX_CARRIER: usize = 10_000;
pub const MAX_CARD: usize = 24;
pub const ORACLE_MAX_N: u64 = 50;

/// The finite group (or truncated interval) a module lives on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// `Z/m_1 x ... x Z/m_r`; elements are coordinate vectors in `[0, m_i)`.
    Cyclic(Vec<u64>),
    /// `[-n, n]` inside `Z`; sums leaving the interval do not exist.
    Interval(u64),
}

impl Ambient {
    fn validate(&self) -> Result<()> {
        let order = match self {
            Ambient::Cyclic(ms) => {
                if ms.contains(&0) {
                    return Err(Error::InvalidModule("cyclic factor of order 0".into()));
                }
                ms.iter()
                    .try_fold(1u64, |acc, &m| acc.checked_mul(m))
                    .unwrap_or(u64::MAX)
            }
            Ambient::Interval(n) => n.saturating_mul(2).saturating_add(1),
        };
        if order > MAX_CARRIER as u64 {
            return Err(Error::GuardExceeded {
                what: "carrier size",
                value: order,
                limit: MAX_CARRIER as u64,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        match self {
            Ambient::Cyclic(ms) => ms.iter().product::<u64>() as usize,
            Ambient::Interval(n) => 2 * *n as usize + 1,
        }
    }

    pub fn zero(&self) -> usize {
        match self {
            Ambient::Cyclic(_) => 0,
            Ambient::Interval(n) => *n as usize,
        }
    }

    /// Coordinates of the element with index `idx`.
    pub fn element(&self, idx: usize) -> Vec<i64> {
        match self {
            Ambient::Cyclic(ms) => {
                let mut rest = idx as u64;
                let mut coords = vec![0; ms.len()];
                for (c, &m) in coords.iter_mut().zip(ms).rev() {
                    *c = (rest % m) as i64;
                    rest /= m;
                }
                coords
            }
            Ambient::Interval(n) => vec![idx as i64 - *n as i64],
        }
    }

    /// Cyclic coordinates are reduced; interval values must lie in range.
    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        match self {
            Ambient::Cyclic(ms) => {
                if coords.len() != ms.len() {
                    return None;
                }
                Some(coords.iter().zip(ms).fold(0u64, |acc, (&c, &m)| {
                    acc * m + c.rem_euclid(m as i64) as u64
                }) as usize)
            }
            Ambient::Interval(n) => match coords {
                [x] if x.unsigned_abs() <= *n => Some((x + *n as i64) as usize),
                _ => None,
            },
        }
    }

    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        match self {
            Ambient::Cyclic(ms) if ms.len() == 1 => Some((a + b) % ms[0] as usize),
            Ambient::Cyclic(_) => {
                let (x, y) = (self.element(a), self.element(b));
                let sum: Vec<i64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
                self.index_of(&sum)
            }
            Ambient::Interval(n) => {
                let n = *n as i64;
                let s = (a as i64 - n) + (b as i64 - n);
                (s.abs() <= n).then(|| (s + n) as usize)
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match self {
            Ambient::Cyclic(ms) if ms.len() == 1 => (ms[0] as usize - a) % ms[0] as usize,
            Ambient::Cyclic(_) => {
                let x: Vec<i64> = self.element(a).iter().map(|c| -c).collect();
                self.index_of(&x).unwrap()
            }
            Ambient::Interval(n) => 2 * *n as usize - a,
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> Option<usize> {
        self.add(a, self.neg(b))
    }

    /// One representative of each pair `{x, -x}`: positive integers on an
    /// interval, the smaller index on a group.
    fn is_positive_rep(&self, idx: usize) -> bool {
        match self {
            Ambient::Interval(n) => idx > *n as usize,
            Ambient::Cyclic(_) => idx <= self.neg(idx),
        }
    }

    pub fn format_element(&self, idx: usize) -> String {
        let coords = self.element(idx);
        match coords.as_slice() {
            [x] => x.to_string(),
            _ => format!(
                "({})",
                coords
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Cyclic(ms) if ms.is_empty() => f.write_str("0"),
            Ambient::Cyclic(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| format!("Z/{m}")).collect();
                f.write_str(&parts.join(" x "))
            }
            Ambient::Interval(n) => write!(f, "[-{n}, {n}]"),
        }
    }
}

/// A nonnegative rational or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    Finite(BigRational),
    Infinite,
}

impl Weight {
    pub fn zero() -> Self {
        Weight::Finite(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        Weight::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn at_most(&self, bound: &BigRational) -> bool {
        match self {
            Weight::Finite(w) => w <= bound,
            Weight::Infinite => false,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => f.write_str(&format_rational(w)),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            return Ok(Weight::Infinite);
        }
        let w = parse_rational(s)?;
        if w.is_negative() {
            return Err(Error::InvalidModule(format!("negative weight {s}")));
        }
        Ok(Weight::Finite(w))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteToleranceModule {
    ambient: Ambient,
    mass: Vec<Weight>,
    mass_bound: BigRational,
    cost: Vec<Weight>,
    tol: BigRational,
    // Masses and bound over a common denominator; u64::MAX is infinite.
    scaled_mass: Vec<u64>,
    scaled_bound: u64,
    // Elements d with cost(d) <= tol.
    ball: Vec<usize>,
    close: Vec<bool>,
}

impl FiniteToleranceModule {
    /// `mass` and `cost` are indexed by element index. Checks that
    /// `cost(0) = 0`, and that cost and mass are invariant under negation.
    pub fn new(
        ambient: Ambient,
        mass: Vec<Weight>,
        mass_bound: BigRational,
        cost: Vec<Weight>,
        tol: BigRational,
    ) -> Result<Self> {
        ambient.validate()?;
        let order = ambient.order();
        if mass.len() != order || cost.len() != order {
            return Err(Error::InvalidModule(format!(
                "mass and cost tables need {order} entries"
            )));
        }
        if mass_bound.is_negative() || tol.is_negative() {
            return Err(Error::InvalidModule("negative bound".into()));
        }
        for w in mass.iter().chain(&cost) {
            if let Weight::Finite(q) = w {
                if q.is_negative() {
                    return Err(Error::InvalidModule("negative weight".into()));
                }
            }
        }
        if cost[ambient.zero()] != Weight::zero() {
            return Err(Error::InvalidModule("cost(0) must be 0".into()));
        }
        for x in 0..order {
            let nx = ambient.neg(x);
            if cost[x] != cost[nx] {
                return Err(Error::InvalidModule(format!(
                    "cost is not symmetric at {}",
                    ambient.format_element(x)
                )));
            }
            if mass[x] != mass[nx] {
                return Err(Error::InvalidModule(format!(
                    "mass(-x) != mass(x) at {}",
                    ambient.format_element(x)
                )));
            }
        }

        let scale = mass
            .iter()
            .filter_map(|w| match w {
                Weight::Finite(q) => Some(q.denom().clone()),
                Weight::Infinite => None,
            })
            .fold(mass_bound.denom().clone(), |acc, d| acc.lcm(&d));
        let to_u64 = |q: &BigRational| -> Result<u64> {
            (q * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_u64()
                .filter(|&v| v < u64::MAX / 4)
                .ok_or_else(|| Error::InvalidModule("masses too large".into()))
        };
        let scaled_mass = mass
            .iter()
            .map(|w| match w {
                Weight::Finite(q) => to_u64(q),
                Weight::Infinite => Ok(u64::MAX),
            })
            .collect::<Result<Vec<_>>>()?;
        let scaled_bound = to_u64(&mass_bound)?;
        let close: Vec<bool> = cost.iter().map(|c| c.at_most(&tol)).collect();
        let ball = (0..order).filter(|&d| close[d]).collect();

        Ok(FiniteToleranceModule {
            ambient,
            mass,
            mass_bound,
            cost,
            tol,
            scaled_mass,
            scaled_bound,
            ball,
            close,
        })
    }

    /// Builds the tables from functions of element coordinates.
    pub fn from_fns(
        ambient: Ambient,
        mass: impl Fn(&[i64]) -> Weight,
        mass_bound: BigRational,
        cost: impl Fn(&[i64]) -> Weight,
        tol: BigRational,
    ) -> Result<Self> {
        ambient.validate()?;
        let elems: Vec<Vec<i64>> = (0..ambient.order()).map(|i| ambient.element(i)).collect();
        let mass = elems.iter().map(|e| mass(e)).collect();
        let cost = elems.iter().map(|e| cost(e)).collect();
        Self::new(ambient, mass, mass_bound, cost, tol)
    }

    /// `||HZ||_n`: carrier `[-n, n]`, mass `|x|`, bound `n`, equality.
    pub fn hzn(n: u64) -> Result<Self> {
        Self::from_fns(
            Ambient::Interval(n),
            |x| Weight::int(x[0].abs()),
            BigRational::from_integer(BigInt::from(n)),
            diagonal_cost,
            BigRational::zero(),
        )
    }

    /// `Z/m` as the discretized circle: cost `min(d, m - d)/m`, tolerance
    /// `lambda`, every sum exists.
    pub fn circle(m: u64, lambda: BigRational) -> Result<Self> {
        let amb = Ambient::Cyclic(vec![m]);
        Self::from_fns(
            amb.clone(),
            |_| Weight::zero(),
            BigRational::zero(),
            |x| circle_cost(&amb, x),
            lambda,
        )
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn mass(&self, idx: usize) -> &Weight {
        &self.mass[idx]
    }

    pub fn mass_bound(&self) -> &BigRational {
        &self.mass_bound
    }

    pub fn cost(&self, idx: usize) -> &Weight {
        &self.cost[idx]
    }

    pub fn tol(&self) -> &BigRational {
        &self.tol
    }

    pub fn order(&self) -> usize {
        self.ambient.order()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.ambient.sub(x, y).is_some_and(|d| self.close[d])
    }

    /// Indices of every existing sum `sum a_f f`.
    fn reachable(&self, gens: &[usize]) -> Vec<usize> {
        let bound = self.scaled_bound;
        match &self.ambient {
            Ambient::Cyclic(_) => {
                let mut best = vec![u64::MAX; self.order()];
                best[self.ambient.zero()] = 0;
                for &g in gens {
                    let w = self.scaled_mass[g];
                    let ng = self.ambient.neg(g);
                    let mut next = best.clone();
                    for (e, &m) in best.iter().enumerate() {
                        let m = m.saturating_add(w);
                        if m > bound {
                            continue;
                        }
                        for t in [self.ambient.add(e, g), self.ambient.add(e, ng)]
                            .into_iter()
                            .flatten()
                        {
                            next[t] = next[t].min(m);
                        }
                    }
                    best = next;
                }
                (0..self.order()).filter(|&e| best[e] <= bound).collect()
            }
            Ambient::Interval(n) => {
                // Partial sums may leave [-n, n] even when the total returns.
                let vals: Vec<i64> = gens.iter().map(|&g| g as i64 - *n as i64).collect();
                let reach: i64 = vals.iter().map(|v| v.abs()).sum();
                let width = 2 * reach as usize + 1;
                let mut best = vec![u64::MAX; width];
                best[reach as usize] = 0;
                for (&g, &v) in gens.iter().zip(&vals) {
                    let w = self.scaled_mass[g];
                    let mut next = best.clone();
                    for (e, &m) in best.iter().enumerate() {
                        let m = m.saturating_add(w);
                        if m > bound {
                            continue;
                        }
                        for t in [e as i64 + v, e as i64 - v] {
                            let t = t as usize;
                            next[t] = next[t].min(m);
                        }
                    }
                    best = next;
                }
                (0..width)
                    .filter(|&e| best[e] <= bound)
                    .filter_map(|e| self.ambient.index_of(&[e as i64 - reach]))
                    .collect()
            }
        }
    }

    /// Condition 2: every element is related to an existing signed sum.
    pub fn covers(&self, gens: &[usize]) -> bool {
        let mut hit = vec![false; self.order()];
        for s in self.reachable(gens) {
            for &d in &self.ball {
                if let Some(x) = self.ambient.add(s, d) {
                    hit[x] = true;
                }
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Condition 1: distinct members are pairwise unrelated.
    pub fn separated(&self, gens: &[usize]) -> bool {
        gens.iter().enumerate().all(|(i, &x)| {
            gens[i + 1..]
                .iter()
                .all(|&y| x == y || !self.related(x, y))
        })
    }

    /// Checks a literal subset of the carrier against both conditions.
    pub fn is_generating(&self, gens: &[usize]) -> Result<bool> {
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&g| g >= self.order()) {
            return Err(Error::InvalidModule("generators must be distinct elements".into()));
        }
        Ok(self.separated(gens) && self.covers(gens))
    }

    /// Generator candidates: nonzero positive representatives of finite
    /// mass within the bound, with their allowed multiplicity.
    fn candidates(&self) -> Vec<(usize, usize)> {
        let zero = self.ambient.zero();
        (0..self.order())
            .filter(|&x| x != zero && self.ambient.is_positive_rep(x))
            .filter(|&x| self.scaled_mass[x] <= self.scaled_bound)
            .map(|x| (x, if self.ambient.neg(x) == x { 1 } else { 2 }))
            .collect()
    }

    /// A multiset over positive representatives generates when its signed
    /// sums cover and some choice of signs for its simple members makes the
    /// resulting subset separated. A doubled member `f` stands for `{f, -f}`.
    fn check_multiset(&self, multiset: &[usize]) -> Option<Vec<usize>> {
        let mut fixed = Vec::new();
        let mut free = Vec::new();
        let mut i = 0;
        while i < multiset.len() {
            if i + 1 < multiset.len() && multiset[i + 1] == multiset[i] {
                fixed.extend([multiset[i], self.ambient.neg(multiset[i])]);
                i += 2;
            } else {
                free.push(multiset[i]);
                i += 1;
            }
        }
        // Negating everything preserves the relation, so the first free
        // member keeps its sign.
        let choices = 1usize << free.len().saturating_sub(1);
        let subset = (0..choices).find_map(|mask| {
            let mut subset = fixed.clone();
            for (j, &f) in free.iter().enumerate() {
                let flip = j > 0 && mask >> (j - 1) & 1 == 1;
                subset.push(if flip { self.ambient.neg(f) } else { f });
            }
            self.separated(&subset).then_some(subset)
        })?;
        self.covers(multiset).then_some(subset)
    }

    /// First generating multiset of size `k` in lexicographic order whose
    /// first member is candidate `head`.
    fn first_with_head(&self, cands: &[(usize, usize)], head: usize, k: usize) -> Option<Vec<usize>> {
        fn rec(
            m: &FiniteToleranceModule,
            cands: &[(usize, usize)],
            pos: usize,
            used: usize,
            left: usize,
            cur: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            if left == 0 {
                return m.check_multiset(cur);
            }
            // Another copy of the current candidate, then later candidates.
            if pos < cands.len() && used < cands[pos].1 && used > 0 {
                cur.push(cands[pos].0);
                let r = rec(m, cands, pos, used + 1, left - 1, cur);
                cur.pop();
                if r.is_some() {
                    return r;
                }
            }
            for next in pos + 1..cands.len() {
                cur.push(cands[next].0);
                let r = rec(m, cands, next, 1, left - 1, cur);
                cur.pop();
                if r.is_some() {
                    return r;
                }
            }
            None
        }
        let mut cur = vec![cands[head].0];
        rec(self, cands, head, 1, k - 1, &mut cur)
    }

    /// Minimal generating set by exhaustive search in increasing
    /// cardinality. Candidates of one size are checked in parallel; the
    /// lexicographically first success is reported.
    pub fn dim_search(&self, max_card: usize) -> Result<DimWitness> {
        if max_card > MAX_CARD {
            return Err(Error::GuardExceeded {
                what: "max_card",
                value: max_card as u64,
                limit: MAX_CARD as u64,
            });
        }
        if self.covers(&[]) {
            return Ok(DimWitness {
                dim: 0,
                generators: Vec::new(),
            });
        }
        let cands = self.candidates();
        for k in 1..=max_card {
            let found = (0..cands.len())
                .into_par_iter()
                .find_map_first(|head| self.first_with_head(&cands, head, k));
            if let Some(subset) = found {
                return Ok(DimWitness {
                    dim: k,
                    generators: subset.iter().map(|&g| self.ambient.element(g)).collect(),
                });
            }
        }
        Err(Error::NotFound(max_card))
    }

    pub fn dim_bruteforce(&self, max_card: usize) -> Result<usize> {
        Ok(self.dim_search(max_card)?.dim)
    }

    /// Builds a module from its JSON description.
    pub fn from_spec(spec: &ModuleSpec) -> Result<Self> {
        let amb = spec.ambient.clone();
        amb.validate()?;
        let table = |t: &WeightSpec, what: &str| -> Result<Vec<Weight>> {
            let elems = (0..amb.order()).map(|i| amb.element(i));
            Ok(match t {
                WeightSpec::Preset(p) => match p.as_str() {
                    "zero" => elems.map(|_| Weight::zero()).collect(),
                    "diagonal" => elems.map(|e| diagonal_cost(&e)).collect(),
                    "norm" => elems.map(|e| norm(&amb, &e)).collect(),
                    "circle" => elems.map(|e| circle_cost(&amb, &e)).collect(),
                    other => {
                        return Err(Error::InvalidModule(format!("unknown {what} preset {other:?}")))
                    }
                },
                WeightSpec::Table(ws) => ws.clone(),
            })
        };
        Self::new(
            amb.clone(),
            table(&spec.mass, "mass")?,
            parse_rational(&spec.mass_bound)?,
            table(&spec.cost, "cost")?,
            parse_rational(&spec.tol)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimWitness {
    pub dim: usize,
    /// The generating subset as element coordinates.
    pub generators: Vec<Vec<i64>>,
}

/// Weights given by a named preset (`zero`, `diagonal`, `norm`, `circle`)
/// or by an explicit table in element-index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Preset(String),
    Table(Vec<Weight>),
}

/// JSON description of a module, e.g.
/// `{"ambient": {"cyclic": [12]}, "mass": "zero", "mass_bound": "0",
///   "cost": "circle", "tol": "1/6"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub ambient: Ambient,
    pub mass: WeightSpec,
    pub mass_bound: String,
    pub cost: WeightSpec,
    pub tol: String,
}

/// `0` at zero, infinite elsewhere.
pub fn diagonal_cost(x: &[i64]) -> Weight {
    if x.iter().all(|&c| c == 0) {
        Weight::zero()
    } else {
        Weight::Infinite
    }
}

/// Integer norm: `|x|` on an interval, sum of `min(c, m - c)` on a group.
pub fn norm(amb: &Ambient, x: &[i64]) -> Weight {
    match amb {
        Ambient::Interval(_) => Weight::int(x[0].abs()),
        Ambient::Cyclic(ms) => Weight::int(
            x.iter()
                .zip(ms)
                .map(|(&c, &m)| c.min(m as i64 - c))
                .sum(),
        ),
    }
}

/// Sum over factors of the circle distance `min(c, m - c)/m`.
pub fn circle_cost(amb: &Ambient, x: &[i64]) -> Weight {
    match amb {
        Ambient::Interval(_) => Weight::int(x[0].abs()),
        Ambient::Cyclic(ms) => Weight::Finite(
            x.iter()
                .zip(ms)
                .map(|(&c, &m)| {
                    BigRational::new(BigInt::from(c.min(m as i64 - c)), BigInt::from(m))
                })
                .fold(BigRational::zero(), |a, b| a + b),
        ),
    }
}

/// A group homomorphism between products of cyclic groups, stored as its
/// table of images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Ambient,
    target: Ambient,
    images: Vec<usize>,
}

impl GroupHom {
    /// The homomorphism sending the `i`-th unit vector of the source to
    /// `unit_images[i]` (target coordinates).
    pub fn from_units(source: Ambient, target: Ambient, unit_images: &[Vec<i64>]) -> Result<Self> {
        let (Ambient::Cyclic(sm), Ambient::Cyclic(_)) = (&source, &target) else {
            return Err(Error::InvalidHomomorphism("both sides must be cyclic products".into()));
        };
        source.validate()?;
        target.validate()?;
        if unit_images.len() != sm.len() {
            return Err(Error::InvalidHomomorphism("one image per cyclic factor".into()));
        }
        let units = unit_images
            .iter()
            .map(|c| {
                target
                    .index_of(c)
                    .ok_or_else(|| Error::InvalidHomomorphism(format!("bad image {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        // m_i e_i = 0 must map to 0.
        for (&u, &m) in units.iter().zip(sm) {
            let mut acc = target.zero();
            for _ in 0..m {
                acc = target.add(acc, u).unwrap();
            }
            if acc != target.zero() {
                return Err(Error::InvalidHomomorphism(format!(
                    "image {} of a generator of order {m} has the wrong order",
                    target.format_element(u)
                )));
            }
        }
        let images = (0..source.order())
            .map(|x| {
                source
                    .element(x)
                    .iter()
                    .zip(&units)
                    .fold(target.zero(), |acc, (&c, &u)| {
                        (0..c).fold(acc, |a, _| target.add(a, u).unwrap())
                    })
            })
            .collect();
        Self::from_table(source, target, images)
    }

    /// Validates that `images` is additive.
    pub fn from_table(source: Ambient, target: Ambient, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() || images.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidHomomorphism("image table has the wrong shape".into()));
        }
        let hom = GroupHom {
            source,
            target,
            images,
        };
        let n = hom.source.order();
        let gens: Vec<usize> = match &hom.source {
            Ambient::Cyclic(ms) => (0..ms.len())
                .map(|i| {
                    let mut e = vec![0; ms.len()];
                    e[i] = 1;
                    hom.source.index_of(&e).unwrap()
                })
                .collect(),
            Ambient::Interval(_) => {
                return Err(Error::InvalidHomomorphism("an interval is not a group".into()))
            }
        };
        // Additivity against each unit vector determines the whole map.
        for x in 0..n {
            for &g in &gens {
                let lhs = hom.images[hom.source.add(x, g).unwrap()];
                let rhs = hom.target.add(hom.images[x], hom.images[g]);
                if Some(lhs) != rhs {
                    return Err(Error::InvalidHomomorphism("map is not additive".into()));
                }
            }
        }
        if hom.images[hom.source.zero()] != hom.target.zero() {
            return Err(Error::InvalidHomomorphism("0 must map to 0".into()));
        }
        Ok(hom)
    }

    pub fn source(&self) -> &Ambient {
        &self.source
    }

    pub fn target(&self) -> &Ambient {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.images {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// The module on the source of `p` with mass `mass . p` and relation
/// `(x, y)` related iff `(p x, p y)` related.
pub fn pullback(m: &FiniteToleranceModule, p: &GroupHom) -> Result<FiniteToleranceModule> {
    if p.target() != m.ambient() {
        return Err(Error::InvalidHomomorphism("target differs from the module ambient".into()));
    }
    if !p.is_surjective() {
        return Err(Error::InvalidHomomorphism("map is not surjective".into()));
    }
    let n = p.source().order();
    FiniteToleranceModule::new(
        p.source().clone(),
        (0..n).map(|x| m.mass(p.apply(x)).clone()).collect(),
        m.mass_bound().clone(),
        (0..n).map(|x| m.cost(p.apply(x)).clone()).collect(),
        m.tol().clone(),
    )
}

/// `dim ||HZ||_n` by brute force, for `n <= 50`.
pub fn oracle_dim_hzn(n: u64) -> Result<usize> {
    if n > ORACLE_MAX_N {
        return Err(Error::RangeTooLarge {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    FiniteToleranceModule::hzn(n)?.dim_bruteforce(MAX_CARD)
}

/// A named `(module, surjection)` pair for the pullback checks.
pub struct PullbackCase {
    pub name: String,
    pub module: FiniteToleranceModule,
    pub map: GroupHom,
}

/// Surjections between groups of order at most 27, each paired with a
/// circle-metric module and a mass-bounded module on the target.
pub fn pullback_family() -> Vec<PullbackCase> {
    let cyc = |ms: &[u64]| Ambient::Cyclic(ms.to_vec());
    let maps: Vec<(Ambient, Ambient, Vec<Vec<i64>>)> = vec![
        (cyc(&[3]), cyc(&[3]), vec![vec![1]]),
        (cyc(&[9]), cyc(&[3]), vec![vec![1]]),
        (cyc(&[6]), cyc(&[3]), vec![vec![1]]),
        (cyc(&[6]), cyc(&[2]), vec![vec![1]]),
        (cyc(&[12]), cyc(&[6]), vec![vec![1]]),
        (cyc(&[12]), cyc(&[4]), vec![vec![1]]),
        (cyc(&[18]), cyc(&[9]), vec![vec![1]]),
        (cyc(&[27]), cyc(&[9]), vec![vec![1]]),
        (cyc(&[24]), cyc(&[12]), vec![vec![1]]),
        (cyc(&[26]), cyc(&[13]), vec![vec![1]]),
        (cyc(&[12]), cyc(&[12]), vec![vec![5]]),
        (cyc(&[3, 3]), cyc(&[3]), vec![vec![1], vec![1]]),
        (cyc(&[2, 3]), cyc(&[6]), vec![vec![3], vec![2]]),
        (cyc(&[2, 6]), cyc(&[6]), vec![vec![3], vec![1]]),
        (cyc(&[4, 4]), cyc(&[4]), vec![vec![1], vec![0]]),
        (cyc(&[3, 9]), cyc(&[9]), vec![vec![3], vec![1]]),
        (cyc(&[5, 5]), cyc(&[5]), vec![vec![1], vec![2]]),
        (cyc(&[6]), cyc(&[2, 3]), vec![vec![1, 1]]),
        (cyc(&[4, 6]), cyc(&[2, 3]), vec![vec![1, 0], vec![0, 1]]),
        (cyc(&[3, 3, 3]), cyc(&[3, 3]), vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
    ];
    let mut out = Vec::new();
    for (src, tgt, units) in maps {
        let map = GroupHom::from_units(src.clone(), tgt.clone(), &units)
            .expect("family maps are homomorphisms");
        let order = tgt.order() as i64;
        let name = |kind: &str| format!("{src} -> {tgt} [{kind}]");
        let circle = FiniteToleranceModule::from_fns(
            tgt.clone(),
            |_| Weight::zero(),
            BigRational::zero(),
            |x| circle_cost(&tgt, x),
            BigRational::new(BigInt::one(), BigInt::from(order)),
        )
        .unwrap();
        let bounded = FiniteToleranceModule::from_fns(
            tgt.clone(),
            |x| norm(&tgt, x),
            BigRational::from_integer(BigInt::from(order / 2)),
            diagonal_cost,
            BigRational::zero(),
        )
        .unwrap();
        out.push(PullbackCase {
            name: name("circle 1/|A|"),
            module: circle,
            map: map.clone(),
        });
        out.push(PullbackCase {
            name: name("norm-bounded equality"),
            module: bounded,
            map,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_dim_hzn(0).unwrap(), 0);
        assert_eq!(oracle_dim_hzn(2).unwrap(), 2);
        assert_eq!(oracle_dim_hzn(5).unwrap(), 3);
        assert_eq!(oracle_dim_hzn(13).unwrap(), 3);
        assert!(matches!(oracle_dim_hzn(51), Err(Error::RangeTooLarge { .. })));
    }

    #[test]
    fn hz2_generators() {
        let m = FiniteToleranceModule::hzn(2).unwrap();
        let idx = |x: i64| m.ambient().index_of(&[x]).unwrap();
        assert!(m.is_generating(&[idx(1), idx(2)]).unwrap());
        assert!(m.is_generating(&[idx(1), idx(-1)]).unwrap());
        assert!(!m.is_generating(&[idx(2)]).unwrap());
    }

    #[test]
    fn discretized_circles() {
        for (m, lam, dim) in [(12, "1/6", 1), (6, "1/6", 1), (18, "1/18", 2), (12, "1/12", 2), (54, "1/54", 3)] {
            let module = FiniteToleranceModule::circle(m, r(lam)).unwrap();
            assert_eq!(module.dim_bruteforce(6).unwrap(), dim, "Z/{m} at {lam}");
        }
        let module = FiniteToleranceModule::circle(12, r("1/6")).unwrap();
        assert!(module.is_generating(&[4]).unwrap());
    }

    #[test]
    fn pullback_examples() {
        let base = FiniteToleranceModule::circle(3, r("0")).unwrap();
        let p = GroupHom::from_units(Ambient::Cyclic(vec![9]), Ambient::Cyclic(vec![3]), &[vec![1]]).unwrap();
        let up = pullback(&base, &p).unwrap();
        assert_eq!(up.order(), 9);
        assert_eq!(up.dim_bruteforce(6).unwrap(), base.dim_bruteforce(6).unwrap());

        let base = FiniteToleranceModule::circle(3, r("1/3")).unwrap();
        let p = GroupHom::from_units(Ambient::Cyclic(vec![6]), Ambient::Cyclic(vec![3]), &[vec![1]]).unwrap();
        let up = pullback(&base, &p).unwrap();
        assert_eq!(up.dim_bruteforce(6).unwrap(), base.dim_bruteforce(6).unwrap());

        let id = GroupHom::from_units(Ambient::Cyclic(vec![3]), Ambient::Cyclic(vec![3]), &[vec![1]]).unwrap();
        let same = pullback(&base, &id).unwrap();
        assert_eq!(same.cost, base.cost);
    }

    #[test]
    fn rejects_bad_maps() {
        let a = Ambient::Cyclic(vec![3]);
        assert!(GroupHom::from_units(Ambient::Cyclic(vec![4]), a.clone(), &[vec![1]]).is_err());
        let zero = GroupHom::from_units(Ambient::Cyclic(vec![6]), a.clone(), &[vec![0]]).unwrap();
        let m = FiniteToleranceModule::circle(3, r("0")).unwrap();
        assert!(matches!(pullback(&m, &zero), Err(Error::InvalidHomomorphism(_))));
    }

    #[test]
    fn rejects_asymmetric_cost() {
        let amb = Ambient::Cyclic(vec![5]);
        let cost = vec![Weight::zero(), Weight::int(1), Weight::int(2), Weight::int(2), Weight::int(3)];
        let mass = vec![Weight::zero(); 5];
        assert!(FiniteToleranceModule::new(amb, mass, r("0"), cost, r("1")).is_err());
    }

    #[test]
    fn condition_one_depends_on_signs() {
        let m = FiniteToleranceModule::circle(12, r("1/6")).unwrap();
        assert!(m.related(3, 4));
        assert!(!m.related(9, 4));
    }

    #[test]
    fn spec_json() {
        let spec: ModuleSpec = serde_json::from_str(
            r#"{"ambient":{"cyclic":[12]},"mass":"zero","mass_bound":"0","cost":"circle","tol":"1/6"}"#,
        )
        .unwrap();
        let m = FiniteToleranceModule::from_spec(&spec).unwrap();
        assert_eq!(m.dim_bruteforce(4).unwrap(), 1);

        let spec: ModuleSpec = serde_json::from_str(
            r#"{"ambient":{"interval":2},"mass":["2","1","0","1","2"],"mass_bound":"2","cost":"diagonal","tol":"0"}"#,
        )
        .unwrap();
        assert_eq!(FiniteToleranceModule::from_spec(&spec).unwrap().dim_bruteforce(4).unwrap(), 2);
    }

    #[test]
    fn not_found() {
        // A single generator cannot reach 5 points.
        let m = FiniteToleranceModule::hzn(2).unwrap();
        assert!(matches!(m.dim_bruteforce(1), Err(Error::NotFound(1))));
    }
}
