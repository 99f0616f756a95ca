//! Finite dynamical systems over `(Z/pZ)^n` and the Collatz map.
//!
//! A vector field `dx/ds = g(x)` is turned into a self-map by the Euler step
//! `F(x) = x + h·g(x)`; its functional graph is decomposed into cycles (the
//! closed orbits) and the trees hanging off them.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{AlgebraError, Result};
use crate::field::PrimeField;
use crate::poly::{MPoly, PolyRing};

/// Default cap on the number of states an exhaustive decomposition may visit.
pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemMode {
    /// Components are a vector field `g` with `dx_i/ds = g_i(x)`.
    VectorField,
    /// Components are the coordinates of a self-map `F`.
    SelfMap,
}

impl std::str::FromStr for SystemMode {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector-field" => Ok(Self::VectorField),
            "self-map" => Ok(Self::SelfMap),
            other => Err(AlgebraError::InvalidArgument(format!(
                "unknown system mode `{other}` (expected vector-field or self-map)"
            ))),
        }
    }
}

/// `n` polynomials in `n` variables over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicalSystem {
    ring: PolyRing<PrimeField>,
    components: Vec<MPoly<PrimeField>>,
    mode: SystemMode,
}

impl DynamicalSystem {
    pub fn new(components: Vec<MPoly<PrimeField>>, mode: SystemMode) -> Result<Self> {
        let ring = components
            .first()
            .ok_or_else(|| AlgebraError::InvalidArgument("system without components".into()))?
            .ring()
            .clone();
        if components.len() != ring.nvars() {
            return Err(AlgebraError::InvalidArgument(format!(
                "{} components for {} variables",
                components.len(),
                ring.nvars()
            )));
        }
        if components.iter().any(|c| c.ring() != &ring) {
            return Err(AlgebraError::DomainMismatch(
                "components from different rings".into(),
            ));
        }
        Ok(Self {
            ring,
            components,
            mode,
        })
    }

    /// Parses `;`-separated components, one per variable.
    pub fn parse(ring: &PolyRing<PrimeField>, text: &str, mode: SystemMode) -> Result<Self> {
        let comps = text
            .split(';')
            .map(|c| ring.parse(c.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, mode)
    }

    /// The gradient vector field `dx/ds = grad f`.
    pub fn gradient(f: &MPoly<PrimeField>) -> Result<Self> {
        Self::new(f.gradient(), SystemMode::VectorField)
    }

    pub fn ring(&self) -> &PolyRing<PrimeField> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        *self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MPoly<PrimeField>] {
        &self.components
    }

    pub fn mode(&self) -> SystemMode {
        self.mode
    }

    /// `p^n`, or `None` past `u128`.
    pub fn state_count(&self) -> Option<u128> {
        (self.field().modulus() as u128).checked_pow(self.dim() as u32)
    }

    /// Self-map `F(x) = x + h·g(x)`.
    pub fn euler_discretize(&self, h: u64) -> Result<Self> {
        if self.mode != SystemMode::VectorField {
            return Err(AlgebraError::InvalidArgument(
                "Euler discretization applies to vector fields".into(),
            ));
        }
        let h = self.field().reduce(h as i64);
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(i, g)| Ok(&self.ring.var(i)? + &g.scale(&h)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, SystemMode::SelfMap)
    }

    /// Compiles the self-map for repeated evaluation on encoded states.
    pub fn compile(&self, budget: u64) -> Result<CompiledMap> {
        if self.mode != SystemMode::SelfMap {
            return Err(AlgebraError::InvalidArgument(
                "only self-maps can be iterated; discretize the vector field first".into(),
            ));
        }
        let states = self.state_count().unwrap_or(u128::MAX);
        if states > budget as u128 {
            return Err(AlgebraError::StateBudgetExceeded { states, budget });
        }
        let p = self.field().modulus();
        let n = self.dim();
        let mut max_exp = vec![0u32; n];
        let components = self
            .components
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, k)| {
                        for (slot, &e) in max_exp.iter_mut().zip(m.exps()) {
                            *slot = (*slot).max(e);
                        }
                        (*k, m.exps().to_vec())
                    })
                    .collect()
            })
            .collect();
        Ok(CompiledMap {
            p,
            n,
            size: states as usize,
            components,
            max_exp,
        })
    }
}

/// Random self-map with `n` components of degree at most `max_deg`.
pub fn random_self_map<R: rand::Rng + ?Sized>(
    field: PrimeField,
    n: usize,
    rng: &mut R,
    max_deg: u32,
    max_terms: usize,
) -> DynamicalSystem {
    let ring = PolyRing::with_nvars(field, n);
    let comps = (0..n)
        .map(|_| crate::sample::random_fp_poly(&ring, rng, max_deg, max_terms))
        .collect();
    DynamicalSystem::new(comps, SystemMode::SelfMap).expect("components share one ring")
}

/// A self-map on `{0, ..., size-1}`.
pub trait FiniteMap {
    fn size(&self) -> usize;
    fn image(&self, state: usize) -> usize;
}

/// Table-driven map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMap(pub Vec<usize>);

impl FiniteMap for TableMap {
    fn size(&self) -> usize {
        self.0.len()
    }

    fn image(&self, state: usize) -> usize {
        self.0[state]
    }
}

/// Polynomial self-map on `(Z/pZ)^n`; states are encoded base `p` with the
/// first coordinate least significant.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    p: u64,
    n: usize,
    size: usize,
    components: Vec<Vec<(u64, Vec<u32>)>>,
    max_exp: Vec<u32>,
}

impl CompiledMap {
    pub fn encode(&self, point: &[u64]) -> usize {
        point
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn decode(&self, mut state: usize) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            v.push((state % self.p as usize) as u64);
            state /= self.p as usize;
        }
        v
    }

    pub fn eval_point(&self, point: &[u64]) -> Vec<u64> {
        let p = self.p;
        let powers: Vec<Vec<u64>> = point
            .iter()
            .zip(&self.max_exp)
            .map(|(&x, &m)| {
                let mut pw = Vec::with_capacity(m as usize + 1);
                let mut acc = 1 % p;
                pw.push(acc);
                for _ in 0..m {
                    acc = acc * x % p;
                    pw.push(acc);
                }
                pw
            })
            .collect();
        self.components
            .iter()
            .map(|terms| {
                terms.iter().fold(0u64, |sum, (c, exps)| {
                    let t = exps
                        .iter()
                        .enumerate()
                        .fold(*c, |t, (i, &e)| t * powers[i][e as usize] % p);
                    (sum + t) % p
                })
            })
            .collect()
    }
}

impl FiniteMap for CompiledMap {
    fn size(&self) -> usize {
        self.size
    }

    fn image(&self, state: usize) -> usize {
        self.encode(&self.eval_point(&self.decode(state)))
    }
}

/// Cycles and tails of a functional graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    /// Each cycle starts at its smallest state and follows the map; cycles are
    /// sorted by that smallest state.
    pub cycles: Vec<Vec<usize>>,
    /// Distance from each state to its cycle (0 on cycles).
    pub tail_lengths: Vec<u32>,
    pub periodic_count: usize,
}

impl OrbitDecomposition {
    pub fn state_count(&self) -> usize {
        self.tail_lengths.len()
    }

    pub fn tail_state_count(&self) -> usize {
        self.tail_lengths.iter().filter(|&&t| t > 0).count()
    }

    pub fn max_tail(&self) -> u32 {
        self.tail_lengths.iter().copied().max().unwrap_or(0)
    }

    /// Cycle lengths sum to the periodic count and, with the tail states, cover
    /// the whole domain.
    pub fn is_partition(&self) -> bool {
        let on_cycles: usize = self.cycles.iter().map(Vec::len).sum();
        let mut seen = vec![false; self.state_count()];
        for &s in self.cycles.iter().flatten() {
            if s >= seen.len() || std::mem::replace(&mut seen[s], true) || self.tail_lengths[s] != 0 {
                return false;
            }
        }
        on_cycles == self.periodic_count && on_cycles + self.tail_state_count() == self.state_count()
    }

    /// Re-applies the map around every cycle.
    pub fn verify_cycles<M: FiniteMap + ?Sized>(&self, map: &M) -> bool {
        self.cycles.iter().all(|c| {
            c.iter()
                .enumerate()
                .all(|(i, &s)| map.image(s) == c[(i + 1) % c.len()])
        })
    }
}

/// Full functional-graph decomposition by pointer chasing with visit marks.
pub fn orbit_decomposition<M: FiniteMap + ?Sized>(map: &M, budget: u64) -> Result<OrbitDecomposition> {
    let n = map.size();
    if n as u128 > budget as u128 {
        return Err(AlgebraError::StateBudgetExceeded {
            states: n as u128,
            budget,
        });
    }
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut mark = vec![UNSEEN; n];
    let mut tail = vec![0u32; n];
    let mut cycles = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut pos_in_path = vec![usize::MAX; n];

    for start in 0..n {
        if mark[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut s = start;
        while mark[s] == UNSEEN {
            mark[s] = ON_PATH;
            pos_in_path[s] = path.len();
            path.push(s);
            s = map.image(s);
            if s >= n {
                return Err(AlgebraError::InvalidArgument(format!(
                    "map sends a state to {s}, outside 0..{n}"
                )));
            }
        }
        let tail_end = if mark[s] == ON_PATH {
            let first = pos_in_path[s];
            let cycle = &path[first..];
            let min_at = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap();
            let mut rotated = cycle[min_at..].to_vec();
            rotated.extend_from_slice(&cycle[..min_at]);
            for &c in cycle {
                tail[c] = 0;
                mark[c] = DONE;
            }
            cycles.push(rotated);
            first
        } else {
            path.len()
        };
        let mut d = if mark[s] == DONE && tail_end == path.len() {
            tail[s]
        } else {
            0
        };
        for &t in path[..tail_end].iter().rev() {
            d += 1;
            tail[t] = d;
            mark[t] = DONE;
        }
        for &t in &path {
            pos_in_path[t] = usize::MAX;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    let periodic_count = cycles.iter().map(Vec::len).sum();
    Ok(OrbitDecomposition {
        cycles,
        tail_lengths: tail,
        periodic_count,
    })
}

/// Number of periodic points of the Euler map of `sys` with step `h`.
pub fn periodic_point_count(sys: &DynamicalSystem, h: u64, budget: u64) -> Result<usize> {
    let map = sys.euler_discretize(h)?.compile(budget)?;
    Ok(orbit_decomposition(&map, budget)?.periodic_count)
}

/// Summary of an Euler-map decomposition with cycles written as points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub p: u64,
    pub n: usize,
    pub mode: SystemMode,
    pub h: Option<u64>,
    pub system: Vec<String>,
    pub map: Vec<String>,
    pub states: usize,
    pub cycle_count: usize,
    pub periodic_count: usize,
    pub tail_states: usize,
    pub max_tail: u32,
    pub cycle_lengths: Vec<usize>,
    pub cycles: Vec<Vec<Vec<u64>>>,
    pub cycles_truncated: bool,
}

/// Decomposes the system (after an Euler step when it is a vector field).
/// At most `max_cycles` cycles are listed explicitly.
pub fn orbit_report(sys: &DynamicalSystem, h: u64, budget: u64, max_cycles: usize) -> Result<OrbitReport> {
    let (self_map, step) = match sys.mode() {
        SystemMode::VectorField => (sys.euler_discretize(h)?, Some(h)),
        SystemMode::SelfMap => (sys.clone(), None),
    };
    let map = self_map.compile(budget)?;
    let dec = orbit_decomposition(&map, budget)?;
    Ok(OrbitReport {
        p: sys.field().modulus(),
        n: sys.dim(),
        mode: sys.mode(),
        h: step,
        system: sys.components().iter().map(ToString::to_string).collect(),
        map: self_map.components().iter().map(ToString::to_string).collect(),
        states: dec.state_count(),
        cycle_count: dec.cycles.len(),
        periodic_count: dec.periodic_count,
        tail_states: dec.tail_state_count(),
        max_tail: dec.max_tail(),
        cycle_lengths: dec.cycles.iter().map(Vec::len).collect(),
        cycles: dec
            .cycles
            .iter()
            .take(max_cycles)
            .map(|c| c.iter().map(|&s| map.decode(s)).collect())
            .collect(),
        cycles_truncated: dec.cycles.len() > max_cycles,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollatzVariant {
    /// `x/2` on even, `3x+1` on odd.
    Paper,
    /// `x/2` on even, `(3x+1)/2` on odd.
    Accelerated,
}

impl std::str::FromStr for CollatzVariant {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "accelerated" => Ok(Self::Accelerated),
            other => Err(AlgebraError::InvalidArgument(format!(
                "unknown Collatz variant `{other}` (expected paper or accelerated)"
            ))),
        }
    }
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_big_vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollatzRecord {
    #[serde(serialize_with = "ser_big")]
    pub start: BigUint,
    pub variant: CollatzVariant,
    /// Steps before the orbit enters its cycle.
    pub steps_to_cycle: Option<u64>,
    /// The cycle, starting at its smallest element; empty if the budget ran out.
    #[serde(serialize_with = "ser_big_vec")]
    pub cycle: Vec<BigUint>,
    #[serde(serialize_with = "ser_big")]
    pub peak: BigUint,
    pub steps_taken: u64,
    pub budget_exhausted: bool,
}

/// One step of the chosen variant; `None` on overflow of `T`.
pub fn collatz_step<T>(x: &T, variant: CollatzVariant) -> Option<T>
where
    T: Integer + Clone + CheckedAdd + CheckedMul + FromPrimitive,
{
    let two = T::from_u8(2)?;
    if x.is_even() {
        return Some(x.clone() / two);
    }
    let y = x.checked_mul(&T::from_u8(3)?)?.checked_add(&T::one())?;
    Some(match variant {
        CollatzVariant::Paper => y,
        CollatzVariant::Accelerated => y / two,
    })
}

struct RawOrbit<T> {
    steps_to_cycle: Option<u64>,
    cycle: Vec<T>,
    peak: T,
    steps: u64,
}

fn run_orbit<T>(start: T, variant: CollatzVariant, budget: u64) -> Option<RawOrbit<T>>
where
    T: Integer + Clone + Hash + CheckedAdd + CheckedMul + FromPrimitive,
{
    let mut seen: HashMap<T, u64> = HashMap::new();
    let mut history: Vec<T> = Vec::new();
    let mut peak = start.clone();
    let mut x = start;
    let mut steps = 0u64;
    loop {
        if let Some(&i) = seen.get(&x) {
            let cycle = history[i as usize..].to_vec();
            return Some(RawOrbit {
                steps_to_cycle: Some(i),
                cycle,
                peak,
                steps,
            });
        }
        if steps == budget {
            return Some(RawOrbit {
                steps_to_cycle: None,
                cycle: Vec::new(),
                peak,
                steps,
            });
        }
        seen.insert(x.clone(), history.len() as u64);
        history.push(x.clone());
        x = collatz_step(&x, variant)?;
        if x > peak {
            peak = x.clone();
        }
        steps += 1;
    }
}

fn normalize_cycle<T: Ord + Clone>(cycle: &[T]) -> Vec<T> {
    let Some(min_at) = cycle.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i) else {
        return Vec::new();
    };
    let mut v = cycle[min_at..].to_vec();
    v.extend_from_slice(&cycle[..min_at]);
    v
}

/// Iterates from `start` until a state repeats or `budget` steps were taken.
/// Machine integers are used until they would overflow, then arbitrary precision.
pub fn collatz_orbit(start: &BigUint, variant: CollatzVariant, budget: u64) -> CollatzRecord {
    let to_big = |v: &u64| BigUint::from(*v);
    let raw = start
        .to_u64()
        .and_then(|s| run_orbit::<u64>(s, variant, budget))
        .map(|r| RawOrbit {
            steps_to_cycle: r.steps_to_cycle,
            cycle: r.cycle.iter().map(to_big).collect(),
            peak: to_big(&r.peak),
            steps: r.steps,
        })
        .unwrap_or_else(|| {
            run_orbit::<BigUint>(start.clone(), variant, budget).expect("BigUint never overflows")
        });
    let cycle = normalize_cycle(&raw.cycle);
    debug_assert!(verify_collatz_cycle(&cycle, variant));
    CollatzRecord {
        start: start.clone(),
        variant,
        steps_to_cycle: raw.steps_to_cycle,
        budget_exhausted: raw.steps_to_cycle.is_none(),
        cycle,
        peak: raw.peak,
        steps_taken: raw.steps,
    }
}

/// Applying the map around `cycle` visits each entry in turn and returns to the start.
pub fn verify_collatz_cycle(cycle: &[BigUint], variant: CollatzVariant) -> bool {
    cycle.iter().enumerate().all(|(i, x)| {
        collatz_step(x, variant).as_ref() == Some(&cycle[(i + 1) % cycle.len()])
    })
}

/// Parities of the first `k` accelerated steps from `x`, bit `j` for step `j`.
pub fn parity_vector(mut x: u64, k: u32) -> u64 {
    let mut bits = 0u64;
    for j in 0..k {
        if x & 1 == 1 {
            bits |= 1 << j;
            x = (3 * x + 1) / 2;
        } else {
            x /= 2;
        }
    }
    bits
}

/// Largest `k` accepted by [`parity_bijection_check`].
pub const MAX_PARITY_BITS: u32 = 16;

/// Whether residues mod `2^k` map bijectively onto parity vectors of length `k`
/// under the accelerated map.
pub fn parity_bijection_check(k: u32) -> Result<bool> {
    if k > MAX_PARITY_BITS {
        return Err(AlgebraError::InvalidArgument(format!(
            "k = {k} exceeds {MAX_PARITY_BITS}"
        )));
    }
    let n = 1usize << k;
    let mut hit = vec![false; n];
    for r in 0..n as u64 {
        let v = parity_vector(r, k) as usize;
        if std::mem::replace(&mut hit[v], true) {
            return Ok(false);
        }
    }
    Ok(true)
}
