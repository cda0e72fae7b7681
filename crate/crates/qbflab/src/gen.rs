//! Deterministic formula constructors.
//!
//! Canonical variable numbering per family (so golden files are stable):
//!
//! - equality family, size n: `x_i = i`, `u_i = n+i`, `t_i = 2n+i`;
//! - the κ family: `y_0 = 1`, then per level k the tuple `(y_k, y'_k, u_k)`
//!   (with `v_k` appended in the doubled variants), then `y_{n+1} … y_{2n}`;
//! - random Q(n,m,c): all Y blocks (`y_i^j = (i−1)n + j`), then all X blocks
//!   (`x_i^j = n² + (i−1)m + j`), then `t_i = n² + nm + i`.
//!
//! Seeded sampling is bit-exact: one [`SplitMix64`] substream per component,
//! clause universes enumerated by a documented canonical index, uniform
//! without replacement via rejection of repeats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcnf::{Block, Clause, Literal, Prefix, Qcnf, Quantifier, VarId};
use crate::rng::SplitMix64;

fn v(id: u32) -> VarId {
    VarId::new(id)
}

fn pos(id: u32) -> Literal {
    Literal::positive(v(id))
}

fn neg(id: u32) -> Literal {
    Literal::negative(v(id))
}

/// The equality formula of size `n`:
/// `∃x₁…xₙ ∀u₁…uₙ ∃t₁…tₙ · ⋀ᵢ (xᵢ∨uᵢ∨¬tᵢ)(¬xᵢ∨¬uᵢ∨¬tᵢ) ∧ (t₁∨…∨tₙ)`.
pub fn equality(n: u32) -> Result<Qcnf> {
    if n == 0 {
        return Err(Error::invalid("equality family needs n >= 1"));
    }
    let x = |i: u32| i;
    let u = |i: u32| n + i;
    let t = |i: u32| 2 * n + i;

    let prefix = Prefix::new(vec![
        Block::new(Quantifier::Exists, (1..=n).map(|i| v(x(i)))),
        Block::new(Quantifier::Forall, (1..=n).map(|i| v(u(i)))),
        Block::new(Quantifier::Exists, (1..=n).map(|i| v(t(i)))),
    ])?;
    let mut matrix = Vec::with_capacity(2 * n as usize + 1);
    for i in 1..=n {
        matrix.push(Clause::new([pos(x(i)), pos(u(i)), neg(t(i))]));
        matrix.push(Clause::new([neg(x(i)), neg(u(i)), neg(t(i))]));
    }
    matrix.push(Clause::new((1..=n).map(|i| pos(t(i)))));

    let mut names = std::collections::BTreeMap::new();
    for i in 1..=n {
        names.insert(v(x(i)), format!("x{i}"));
        names.insert(v(u(i)), format!("u{i}"));
        names.insert(v(t(i)), format!("t{i}"));
    }
    Ok(Qcnf::new(prefix, matrix)?.with_names(names))
}

/// Which member of the κ family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KbkfVariant {
    /// κ(n): the original formulas.
    Plain,
    /// λ(n): every `u_k` literal doubled with a matching `v_k` literal,
    /// `v_k` quantified in `u_k`'s block.
    Doubled,
    /// λ′(n): matrix of λ(n), all `v_k` moved into the last universal block.
    Weak,
}

/// κ(n).
pub fn kbkf(n: u32) -> Result<Qcnf> {
    kbkf_variant(n, KbkfVariant::Plain)
}

/// λ(n): κ(n) with doubled universal variables.
pub fn kbkf_doubled(n: u32) -> Result<Qcnf> {
    kbkf_variant(n, KbkfVariant::Doubled)
}

/// λ′(n): λ(n) with all doubling variables quantified in the last universal
/// block.
pub fn kbkf_weak(n: u32) -> Result<Qcnf> {
    kbkf_variant(n, KbkfVariant::Weak)
}

fn kbkf_variant(n: u32, variant: KbkfVariant) -> Result<Qcnf> {
    if n == 0 {
        return Err(Error::invalid("kbkf family needs n >= 1"));
    }
    let doubled = variant != KbkfVariant::Plain;
    let stride = if doubled { 4 } else { 3 };
    // y_0 = 1; per level k: y_k, y'_k, u_k (, v_k); tail existentials after.
    let y0 = 1u32;
    let yk = |k: u32| 2 + stride * (k - 1);
    let ypk = |k: u32| 3 + stride * (k - 1);
    let uk = |k: u32| 4 + stride * (k - 1);
    let vk = |k: u32| 5 + stride * (k - 1); // doubled variants only
    let tail = |t: u32| 1 + stride * n + t; // y_{n+t}

    let mut names = std::collections::BTreeMap::new();
    names.insert(v(y0), "y0".to_string());
    for k in 1..=n {
        names.insert(v(yk(k)), format!("y{k}"));
        names.insert(v(ypk(k)), format!("y{k}'"));
        names.insert(v(uk(k)), format!("u{k}"));
        if doubled {
            names.insert(v(vk(k)), format!("v{k}"));
        }
    }
    for t in 1..=n {
        names.insert(v(tail(t)), format!("y{}", n + t));
    }

    let mut blocks = Vec::new();
    blocks.push(Block::new(Quantifier::Exists, [v(y0), v(yk(1)), v(ypk(1))]));
    for k in 1..=n {
        let mut uvars = vec![v(uk(k))];
        match variant {
            KbkfVariant::Doubled => uvars.push(v(vk(k))),
            KbkfVariant::Weak if k == n => uvars.extend((1..=n).map(|j| v(vk(j)))),
            _ => {}
        }
        blocks.push(Block::new(Quantifier::Forall, uvars));
        if k < n {
            blocks.push(Block::new(
                Quantifier::Exists,
                [v(yk(k + 1)), v(ypk(k + 1))],
            ));
        }
    }
    blocks.push(Block::new(Quantifier::Exists, (1..=n).map(|t| v(tail(t)))));
    let prefix = Prefix::new(blocks)?;

    // each literal on u_k gains the matching literal on v_k in the doubled
    // variants
    let u_neg = |k: u32| -> Vec<Literal> {
        if doubled {
            vec![neg(uk(k)), neg(vk(k))]
        } else {
            vec![neg(uk(k))]
        }
    };
    let u_pos = |k: u32| -> Vec<Literal> {
        if doubled {
            vec![pos(uk(k)), pos(vk(k))]
        } else {
            vec![pos(uk(k))]
        }
    };

    let mut matrix = Vec::new();
    matrix.push(Clause::new([neg(y0)]));
    matrix.push(Clause::new([pos(y0), neg(yk(1)), neg(ypk(1))]));
    for k in 1..n {
        let mut c = vec![pos(yk(k))];
        c.extend(u_neg(k));
        c.extend([neg(yk(k + 1)), neg(ypk(k + 1))]);
        matrix.push(Clause::new(c));
        let mut c = vec![pos(ypk(k))];
        c.extend(u_pos(k));
        c.extend([neg(yk(k + 1)), neg(ypk(k + 1))]);
        matrix.push(Clause::new(c));
    }
    let mut c = vec![pos(yk(n))];
    c.extend(u_neg(n));
    c.extend((1..=n).map(|t| neg(tail(t))));
    matrix.push(Clause::new(c));
    let mut c = vec![pos(ypk(n))];
    c.extend(u_pos(n));
    c.extend((1..=n).map(|t| neg(tail(t))));
    matrix.push(Clause::new(c));
    for t in 1..=n {
        let mut c = u_neg(t);
        c.push(pos(tail(t)));
        matrix.push(Clause::new(c));
        let mut c = u_pos(t);
        c.push(pos(tail(t)));
        matrix.push(Clause::new(c));
    }

    Ok(Qcnf::new(prefix, matrix)?.with_names(names))
}

/// Sidecar metadata for one sampled component of the random family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentMeta {
    /// 1-based component index.
    pub index: u32,
    pub t_var: VarId,
    pub y_vars: Vec<VarId>,
    pub x_vars: Vec<VarId>,
    /// The sampled (1,2)-clauses, as signed literals, in sampling order;
    /// the matrix clause is each of these with `¬t_i` added.
    pub clauses: Vec<Vec<i64>>,
}

impl ComponentMeta {
    /// The component as a standalone QBF `Ψ_i = ∃Y_i ∀X_i · ψ_i`.
    pub fn psi(&self) -> Result<Qcnf> {
        let prefix = Prefix::new(vec![
            Block::new(Quantifier::Exists, self.y_vars.iter().copied()),
            Block::new(Quantifier::Forall, self.x_vars.iter().copied()),
        ])?;
        let matrix = self
            .clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Qcnf::new(prefix, matrix)
    }
}

/// Sidecar metadata for a sampled `Q(n,m,c)` instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomQMeta {
    pub n: u32,
    pub m: u32,
    pub clauses_per_component: u32,
    pub seed: u64,
    pub components: Vec<ComponentMeta>,
}

/// Clause universe for one component: existential pairs `a < b` over `n`
/// variables (major), 4 sign combinations, universal literal over `m`
/// variables (minor).
struct ClauseUniverse {
    n_exist: u32,
    m_univ: u32,
}

impl ClauseUniverse {
    fn size(&self) -> u64 {
        let pairs = self.n_exist as u64 * (self.n_exist as u64 - 1) / 2;
        pairs * 4 * (2 * self.m_univ as u64)
    }

    /// Decodes a canonical index into (y-literal, y-literal, x-literal) over
    /// 0-based variable offsets.
    fn decode(&self, index: u64) -> (i64, i64, i64) {
        let um = 2 * self.m_univ as u64;
        let u = index % um;
        let rest = index / um;
        let s = rest % 4;
        let p = rest / 4;
        let (a, b) = pair_from_index(self.n_exist as u64, p);
        let la = if s / 2 == 0 {
            a as i64 + 1
        } else {
            -(a as i64 + 1)
        };
        let lb = if s.is_multiple_of(2) {
            b as i64 + 1
        } else {
            -(b as i64 + 1)
        };
        let uvar = u / 2;
        let lu = if u.is_multiple_of(2) {
            uvar as i64 + 1
        } else {
            -(uvar as i64 + 1)
        };
        (la, lb, lu)
    }
}

/// The `p`-th ordered pair `(a, b)` with `a < b < n`, pairs enumerated in
/// lexicographic order.
fn pair_from_index(n: u64, p: u64) -> (u64, u64) {
    let mut a = 0;
    let mut remaining = p;
    loop {
        let count = n - a - 1;
        if remaining < count {
            return (a, a + 1 + remaining);
        }
        remaining -= count;
        a += 1;
    }
}

/// Samples `count` distinct universe indices, uniformly without replacement,
/// by rejection of repeats; preserved in sampling order.
fn sample_distinct(rng: &mut SplitMix64, universe: u64, count: u64) -> Vec<u64> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let idx = rng.next_below(universe);
        if seen.insert(idx) {
            out.push(idx);
        }
    }
    out
}

/// The random QBF `Q(n, m, c)` with `cn` clauses per component:
/// `∃Y₁…Yₙ ∀X₁…Xₙ ∃t₁…tₙ · ⋀ᵢⱼ (¬tᵢ ∨ Cᵢʲ) ∧ (t₁∨…∨tₙ)`, each `Cᵢʲ` with one
/// literal on `Xᵢ` and two literals on distinct `Yᵢ` variables.
pub fn random_q(n: u32, m: u32, cn: u32, seed: u64) -> Result<(Qcnf, RandomQMeta)> {
    if n < 2 {
        return Err(Error::invalid(
            "random Q needs n >= 2 (two distinct Y variables per clause)",
        ));
    }
    if m < 1 {
        return Err(Error::invalid("random Q needs m >= 1"));
    }
    let universe = ClauseUniverse {
        n_exist: n,
        m_univ: m,
    };
    if cn == 0 || cn as u64 > universe.size() {
        return Err(Error::invalid(format!(
            "clause count {cn} outside 1..={} (clause universe size)",
            universe.size()
        )));
    }

    let y = |i: u32, j: u32| (i - 1) * n + j; // j in 1..=n
    let x = |i: u32, j: u32| n * n + (i - 1) * m + j; // j in 1..=m
    let t = |i: u32| n * n + n * m + i;

    let mut components = Vec::with_capacity(n as usize);
    let mut matrix = Vec::new();
    for i in 1..=n {
        let mut rng = SplitMix64::substream(seed, i as u64);
        let picks = sample_distinct(&mut rng, universe.size(), cn as u64);
        let mut clauses = Vec::with_capacity(cn as usize);
        for idx in picks {
            let (la, lb, lu) = universe.decode(idx);
            let to_lit = |l: i64, base: &dyn Fn(u32) -> u32| {
                let var = base(l.unsigned_abs() as u32);
                Literal::new(v(var), l > 0)
            };
            let lits = vec![
                to_lit(la, &|j| y(i, j)),
                to_lit(lb, &|j| y(i, j)),
                to_lit(lu, &|j| x(i, j)),
            ];
            clauses.push(lits.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>());
            let mut full = lits;
            full.push(neg(t(i)));
            matrix.push(Clause::new(full));
        }
        components.push(ComponentMeta {
            index: i,
            t_var: v(t(i)),
            y_vars: (1..=n).map(|j| v(y(i, j))).collect(),
            x_vars: (1..=m).map(|j| v(x(i, j))).collect(),
            clauses,
        });
    }
    matrix.push(Clause::new((1..=n).map(|i| pos(t(i)))));

    let prefix = Prefix::new(vec![
        Block::new(
            Quantifier::Exists,
            (1..=n).flat_map(|i| (1..=n).map(move |j| v(y(i, j)))),
        ),
        Block::new(
            Quantifier::Forall,
            (1..=n).flat_map(|i| (1..=m).map(move |j| v(x(i, j)))),
        ),
        Block::new(Quantifier::Exists, (1..=n).map(|i| v(t(i)))),
    ])?;
    let qcnf = Qcnf::new(prefix, matrix)?;
    let meta = RandomQMeta {
        n,
        m,
        clauses_per_component: cn,
        seed,
        components,
    };
    Ok((qcnf, meta))
}

/// A random (1,2)-QCNF `∀X∃Y·φ`: `m` universal variables `1..=m`, `n`
/// existential variables `m+1..=m+n`, each clause one universal literal and
/// two existential literals on distinct variables.
pub fn random_12qcnf(m: u32, n: u32, clause_count: u32, seed: u64) -> Result<Qcnf> {
    if n < 2 || m < 1 {
        return Err(Error::invalid("(1,2)-QCNF needs m >= 1 and n >= 2"));
    }
    let universe = ClauseUniverse {
        n_exist: n,
        m_univ: m,
    };
    if clause_count as u64 > universe.size() {
        return Err(Error::invalid(format!(
            "clause count {clause_count} exceeds clause universe size {}",
            universe.size()
        )));
    }
    let mut rng = SplitMix64::substream(seed, 1);
    let picks = sample_distinct(&mut rng, universe.size(), clause_count as u64);
    let matrix = picks
        .into_iter()
        .map(|idx| {
            let (la, lb, lu) = universe.decode(idx);
            let ylit = |l: i64| Literal::new(v(m + l.unsigned_abs() as u32), l > 0);
            let xlit = |l: i64| Literal::new(v(l.unsigned_abs() as u32), l > 0);
            Clause::new([ylit(la), ylit(lb), xlit(lu)])
        })
        .collect();
    let prefix = Prefix::new(vec![
        Block::new(Quantifier::Forall, (1..=m).map(v)),
        Block::new(Quantifier::Exists, (m + 1..=m + n).map(v)),
    ])?;
    Qcnf::new(prefix, matrix)
}

/// A random 2-CNF on `n` variables: distinct clauses of width 2 on distinct
/// variables, wrapped as a purely existential QCNF.
pub fn random_2sat(n: u32, clause_count: u32, seed: u64) -> Result<Qcnf> {
    if n < 2 {
        return Err(Error::invalid("random 2-SAT needs n >= 2"));
    }
    let pairs = n as u64 * (n as u64 - 1) / 2;
    let universe = pairs * 4;
    if clause_count as u64 > universe {
        return Err(Error::invalid(format!(
            "clause count {clause_count} exceeds clause universe size {universe}"
        )));
    }
    let mut rng = SplitMix64::substream(seed, 1);
    let picks = sample_distinct(&mut rng, universe, clause_count as u64);
    let matrix = picks
        .into_iter()
        .map(|idx| {
            let s = idx % 4;
            let p = idx / 4;
            let (a, b) = pair_from_index(n as u64, p);
            let la = Literal::new(v(a as u32 + 1), s / 2 == 0);
            let lb = Literal::new(v(b as u32 + 1), s % 2 == 0);
            Clause::new([la, lb])
        })
        .collect();
    let prefix = Prefix::new(vec![Block::new(Quantifier::Exists, (1..=n).map(v))])?;
    Qcnf::new(prefix, matrix)
}
