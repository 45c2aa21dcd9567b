//! The generators `C_A` of the Racah algebra as exact matrices on the simplex grid,
//! and verifiers for the relations between them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{RacahError, Result};
use crate::expr::Expr;
use crate::grid::SimplexGrid;
use crate::matrix::{divide_by_root, OperatorMatrix};
use crate::operator::{build_racah_operator, kappa_expr, rank_one_operator, DifferenceOperator};
use crate::params::{MultiIndexK, ParameterSet};
use crate::polynomials::{kappa, racah_grid_vector, racah_univariate};
use crate::report::RelationCheck;
use crate::scalar::{format_scalar, int, ExactScalar};

/// Nonempty subset of `{1, ..., n}`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Singleton(usize),
    Interval(usize, usize),
    General,
}

impl LabelSet {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.is_empty() {
            return Err(RacahError::Structure("label sets must be nonempty".into()));
        }
        if members[0] == 0 {
            return Err(RacahError::Range("labels start at 1".into()));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(RacahError::Structure(format!("repeated label in {members:?}")));
        }
        Ok(LabelSet(members))
    }

    /// `[p..q]`.
    pub fn interval(p: usize, q: usize) -> Result<Self> {
        if p > q {
            return Err(RacahError::Range(format!("empty interval [{p}..{q}]")));
        }
        Self::new((p..=q).collect())
    }

    /// Accepts `1,3`, `{1,3}` or, for single-digit labels, `13`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
        let bad = || RacahError::Parse(format!("invalid label set {text:?}"));
        let members = if trimmed.contains(',') {
            trimmed
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            trimmed
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> usize {
        *self.0.last().expect("label sets are nonempty")
    }

    pub fn kind(&self) -> LabelKind {
        let (first, last) = (self.0[0], self.largest());
        if self.0.len() == 1 {
            LabelKind::Singleton(first)
        } else if last - first + 1 == self.0.len() {
            LabelKind::Interval(first, last)
        } else {
            LabelKind::General
        }
    }

    /// `(p, q)` when the set is an interval, singletons included.
    pub fn as_interval(&self) -> Option<(usize, usize)> {
        match self.kind() {
            LabelKind::Singleton(i) => Some((i, i)),
            LabelKind::Interval(p, q) => Some((p, q)),
            LabelKind::General => None,
        }
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|m| other.0.binary_search(m).is_ok())
    }

    pub fn is_disjoint(&self, other: &LabelSet) -> bool {
        self.0.iter().all(|m| other.0.binary_search(m).is_err())
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        let mut members = self.0.clone();
        members.extend(other.0.iter().copied().filter(|m| self.0.binary_search(m).is_err()));
        members.sort_unstable();
        LabelSet(members)
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All nonempty subsets of `{1..n}`, by size and then lexicographically.
pub fn all_label_sets(n: usize) -> Vec<LabelSet> {
    let mut sets: Vec<LabelSet> = (1u64..1 << n)
        .map(|mask| LabelSet((1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect()))
        .collect();
    sets.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
    sets
}

fn check_labels(a: &LabelSet, n: usize) -> Result<()> {
    if a.largest() > n {
        return Err(RacahError::Range(format!("{a} is not a subset of {{1..{n}}}")));
    }
    Ok(())
}

/// The interval generator `C_[p..q]` as a symbolic operator.
pub fn interval_operator(p: usize, q: usize, params: &ParameterSet) -> Result<DifferenceOperator> {
    let n = params.n();
    if p == 0 || p > q || q > n {
        return Err(RacahError::Range(format!("[{p}..{q}] is not an interval in {{1..{n}}}")));
    }
    let dim = params.dim();
    if p == 1 {
        return Ok(DifferenceOperator::multiplication(
            dim,
            kappa_expr(Expr::x(q - 1), Expr::beta(q - 1)),
        ));
    }
    let constant = kappa_expr(
        Expr::zero(),
        Expr::beta(q - 1) - Expr::beta(p - 2) - Expr::int(1),
    );
    let l = build_racah_operator(q - p, p - 2, params)?;
    l.neg().add(&DifferenceOperator::multiplication(dim, constant))
}

/// `C_[p..q]` realized directly on the table's grid.
pub fn generator_interval(p: usize, q: usize, table: &GeneratorTable) -> Result<OperatorMatrix> {
    interval_operator(p, q, &table.params)?.realize(&table.grid)
}

/// `C_ij = C_[i..j] - C_[i+1..j] - C_[i..j-1] + C_[i+1..j-1] + C_i + C_j`.
pub fn generator_pair(i: usize, j: usize, table: &GeneratorTable) -> Result<OperatorMatrix> {
    if i == 0 || i >= j || j > table.params.n() {
        return Err(RacahError::Range(format!("pair ({i}, {j}) needs 1 <= i < j <= n")));
    }
    let interval = |p: usize, q: usize| -> Result<OperatorMatrix> {
        if p > q {
            Ok(OperatorMatrix::zero(table.grid.clone()))
        } else {
            table.get(&LabelSet::interval(p, q)?).cloned()
        }
    };
    let singles = table.get(&LabelSet::new(vec![i])?)?.try_add(table.get(&LabelSet::new(vec![j])?)?)?;
    interval(i, j)?
        .try_sub(&interval(i + 1, j)?)?
        .try_sub(&interval(i, j - 1)?)?
        .try_add(&interval(i + 1, j - 1)?)?
        .try_add(&singles)
}

/// `C_A = sum_{i<j in A} C_ij - (|A| - 2) sum_{i in A} C_i`, reading the pairs from the table.
pub fn generator_general(a: &LabelSet, table: &GeneratorTable) -> Result<OperatorMatrix> {
    check_labels(a, table.params.n())?;
    let m = a.members();
    if m.len() <= 2 {
        return table.get(a).cloned();
    }
    let mut pairs = OperatorMatrix::zero(table.grid.clone());
    let mut singles = OperatorMatrix::zero(table.grid.clone());
    for (x, &i) in m.iter().enumerate() {
        singles = singles.try_add(table.get(&LabelSet(vec![i]))?)?;
        for &j in &m[x + 1..] {
            pairs = pairs.try_add(table.get(&LabelSet(vec![i, j]))?)?;
        }
    }
    pairs.try_sub(&singles.scale(&int(m.len() as i64 - 2)))
}

/// Every generator `C_A`, `A` a nonempty subset of `{1..n}`, realized once.
pub struct GeneratorTable {
    params: ParameterSet,
    grid: Arc<SimplexGrid>,
    cache: BTreeMap<LabelSet, OperatorMatrix>,
}

impl GeneratorTable {
    /// Intervals are realized directly, other pairs from the intervals, and the
    /// remaining sets from the pairs.
    pub fn new(params: ParameterSet) -> Result<Self> {
        let n = params.n();
        let grid = SimplexGrid::new(params.clone());
        let mut table = GeneratorTable { params, grid, cache: BTreeMap::new() };

        let intervals: Vec<(usize, usize)> =
            (1..=n).flat_map(|p| (p..=n).map(move |q| (p, q))).collect();
        let built = intervals
            .par_iter()
            .map(|&(p, q)| Ok((LabelSet::interval(p, q)?, generator_interval(p, q, &table)?)))
            .collect::<Result<Vec<_>>>()?;
        table.cache.extend(built);

        let pairs: Vec<(usize, usize)> =
            (1..=n).flat_map(|i| (i + 2..=n).map(move |j| (i, j))).collect();
        let built = pairs
            .par_iter()
            .map(|&(i, j)| Ok((LabelSet(vec![i, j]), generator_pair(i, j, &table)?)))
            .collect::<Result<Vec<_>>>()?;
        table.cache.extend(built);

        let rest: Vec<LabelSet> = all_label_sets(n)
            .into_iter()
            .filter(|a| !table.cache.contains_key(a))
            .collect();
        let built = rest
            .par_iter()
            .map(|a| Ok((a.clone(), generator_general(a, &table)?)))
            .collect::<Result<Vec<_>>>()?;
        table.cache.extend(built);
        Ok(table)
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn grid(&self) -> &Arc<SimplexGrid> {
        &self.grid
    }

    pub fn get(&self, a: &LabelSet) -> Result<&OperatorMatrix> {
        check_labels(a, self.params.n())?;
        self.cache
            .get(a)
            .ok_or_else(|| RacahError::Structure(format!("generator {a} has not been built")))
    }

    /// `C_A` for `A` given by its members.
    pub fn c(&self, members: &[usize]) -> Result<&OperatorMatrix> {
        self.get(&LabelSet::new(members.to_vec())?)
    }

    pub fn labels(&self) -> impl Iterator<Item = &LabelSet> {
        self.cache.keys()
    }
}

fn names(sets: &[&LabelSet]) -> Vec<String> {
    sets.iter().map(|s| format!("C{s}")).collect()
}

/// `[C_A, C_B] = 0` whenever `A` and `B` are nested or disjoint.
pub fn verify_commutation(table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let sets = all_label_sets(table.params.n());
    let pairs: Vec<(&LabelSet, &LabelSet)> = sets
        .iter()
        .enumerate()
        .flat_map(|(x, a)| sets[x..].iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b))
        .collect();
    pairs
        .par_iter()
        .map(|(a, b)| {
            let residual = table.get(a)?.commutator(table.get(b)?)?;
            Ok(RelationCheck::zero_residual("commutation", names(&[a, b]), &residual))
        })
        .collect()
}

/// The linear dependency `C_A = sum C_ij - (|A|-2) sum C_i` for every `|A| >= 2`.
/// For intervals it compares against the direct realization; for other sets the
/// table entry is itself built this way.
pub fn verify_lind(table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let sets: Vec<LabelSet> = all_label_sets(table.params.n())
        .into_iter()
        .filter(|a| a.len() >= 2)
        .collect();
    sets.par_iter()
        .map(|a| {
            let assembled = generator_general(a, table)?;
            let direct = match a.as_interval() {
                Some((p, q)) => generator_interval(p, q, table)?,
                None => table.get(a)?.clone(),
            };
            let mut residual = assembled.try_sub(&direct)?;
            if a.len() == 2 {
                let (i, j) = (a.members()[0], a.members()[1]);
                let pair = generator_pair(i, j, table)?.try_sub(&direct)?;
                if !pair.is_zero() {
                    residual = pair;
                }
            }
            Ok(RelationCheck::zero_residual("lind", names(&[a]), &residual))
        })
        .collect()
}

/// Singletons and `C_[n]` are the expected multiples of the identity.
pub fn verify_centrality(table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let params = &table.params;
    let n = params.n();
    let mut expected = vec![(LabelSet(vec![1]), kappa(&int(0), &params.beta(0)))];
    for j in 1..n {
        let gap = params.beta(j as isize) - params.beta(j as isize - 1) - int(1);
        expected.push((LabelSet(vec![j + 1]), kappa(&int(0), &gap)));
    }
    expected.push((
        LabelSet::interval(1, n)?,
        kappa(&int(params.big_n() as i64), &params.beta(n as isize - 1)),
    ));
    expected
        .iter()
        .map(|(a, value)| {
            let m = table.get(a)?;
            let scalar = m.as_scalar();
            Ok(RelationCheck::from_bool("central", names(&[a]), scalar.as_ref() == Some(value), || {
                match scalar {
                    Some(s) => format!("scalar {} instead of {}", format_scalar(&s), format_scalar(value)),
                    None => "not a multiple of the identity".to_string(),
                }
            }))
        })
        .collect()
}

/// `C_[p..q] = sigma^{p-2}(C_[2..q-p+2])` for every interval with `p > 2`.
pub fn verify_sigma(table: &GeneratorTable) -> Result<Vec<RelationCheck>> {
    let n = table.params.n();
    let intervals: Vec<(usize, usize)> =
        (3..=n).flat_map(|p| (p..=n).map(move |q| (p, q))).collect();
    intervals
        .par_iter()
        .map(|&(p, q)| {
            let base = interval_operator(2, q - p + 2, &table.params)?;
            let shifted = base.sigma_power(p - 2)?.realize(&table.grid)?;
            let target = LabelSet::interval(p, q)?;
            let residual = shifted.try_sub(table.get(&target)?)?;
            let source = LabelSet::interval(2, q - p + 2)?;
            Ok(RelationCheck::zero_residual("sigma", names(&[&target, &source]), &residual))
        })
        .collect()
}

/// Consecutive intervals `K = [a..b]`, `L = [b+1..c]`, `M = [c+1..d]`, or every
/// ordered triple of pairwise disjoint nonempty sets when `full` is set.
pub fn rank_one_family(n: usize, full: bool) -> Vec<(LabelSet, LabelSet, LabelSet)> {
    let mut out = Vec::new();
    if full {
        // Each label goes to K, L, M or nowhere.
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let mut parts = [Vec::new(), Vec::new(), Vec::new()];
            let mut c = code;
            for label in 1..=n {
                if c % 4 < 3 {
                    parts[c % 4].push(label);
                }
                c /= 4;
            }
            if parts.iter().all(|p| !p.is_empty()) {
                let [k, l, m] = parts;
                out.push((LabelSet(k), LabelSet(l), LabelSet(m)));
            }
        }
        out.sort();
        return out;
    }
    for a in 1..=n {
        for b in a..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push((
                        LabelSet((a..=b).collect()),
                        LabelSet((b + 1..=c).collect()),
                        LabelSet((c + 1..=d).collect()),
                    ));
                }
            }
        }
    }
    out
}

/// The six rank-one identities for disjoint `K`, `L`, `M`:
/// `2F = [C_KL, C_LM] = [C_KM, C_KL] = [C_LM, C_KM]` and the three cyclic
/// expressions for `[C_KL, F]`, `[C_LM, F]`, `[C_KM, F]`.
pub fn verify_rank_one(
    k: &LabelSet,
    l: &LabelSet,
    m: &LabelSet,
    table: &GeneratorTable,
) -> Result<Vec<RelationCheck>> {
    if !(k.is_disjoint(l) && l.is_disjoint(m) && k.is_disjoint(m)) {
        return Err(RacahError::Structure(format!("{k}, {l}, {m} are not pairwise disjoint")));
    }
    let (kl, lm, km) = (k.union(l), l.union(m), k.union(m));
    let klm = kl.union(m);
    let c = |a: &LabelSet| table.get(a);
    let (c_k, c_l, c_m) = (c(k)?, c(l)?, c(m)?);
    let (c_kl, c_lm, c_km, c_klm) = (c(&kl)?, c(&lm)?, c(&km)?, c(&klm)?);

    let two_f = c_kl.commutator(c_lm)?;
    let f = two_f.scale(&crate::scalar::rat(1, 2));
    let operands = names(&[k, l, m]);
    let check = |name: &str, residual: OperatorMatrix| {
        RelationCheck::zero_residual(format!("rank-one {name}"), operands.clone(), &residual)
    };

    let b1 = two_f.try_sub(&c_km.commutator(c_kl)?)?;
    let b2 = two_f.try_sub(&c_lm.commutator(c_km)?)?;
    let b3 = c_km.commutator(c_kl)?.try_sub(&c_lm.commutator(c_km)?)?;
    let r1 = c_kl.commutator(&f)?.try_sub(
        &c_lm.compose(c_kl)?
            .try_sub(&c_kl.compose(c_km)?)?
            .try_add(&c_l.try_sub(c_k)?.compose(&c_m.try_sub(c_klm)?)?)?,
    )?;
    let r2 = c_lm.commutator(&f)?.try_sub(
        &c_km.compose(c_lm)?
            .try_sub(&c_lm.compose(c_kl)?)?
            .try_add(&c_m.try_sub(c_l)?.compose(&c_k.try_sub(c_klm)?)?)?,
    )?;
    let r3 = c_km.commutator(&f)?.try_sub(
        &c_kl.compose(c_km)?
            .try_sub(&c_km.compose(c_lm)?)?
            .try_add(&c_k.try_sub(c_m)?.compose(&c_l.try_sub(c_klm)?)?)?,
    )?;
    Ok(vec![
        check("[C_KL,C_LM]=[C_KM,C_KL]", b1),
        check("[C_KL,C_LM]=[C_LM,C_KM]", b2),
        check("[C_KL,F]", r1),
        check("[C_LM,F]", r2),
        check("[C_KM,F]", r3),
        check("[C_KM,C_KL]=[C_LM,C_KM]", b3),
    ])
}

/// Exact scalars `(d, e)` with `residual = d*k + e*Id`, if they exist.
pub fn fit_span(residual: &OperatorMatrix, k: &OperatorMatrix) -> Result<(ExactScalar, ExactScalar)> {
    let k00 = k.entry(0, 0);
    let r00 = residual.entry(0, 0);
    let shifted_k = k.try_sub(&OperatorMatrix::scalar(k.grid().clone(), &k00))?;
    let shifted_r = residual.try_sub(&OperatorMatrix::scalar(k.grid().clone(), &r00))?;
    let d = match shifted_k.first_nonzero() {
        Some((r, c, v)) => shifted_r.entry(r, c) / v,
        None => ExactScalar::zero(),
    };
    let e = &r00 - &d * &k00;
    let leftover = residual
        .try_sub(&k.scale(&d))?
        .try_sub(&OperatorMatrix::scalar(k.grid().clone(), &e))?;
    match leftover.first_nonzero() {
        None => Ok((d, e)),
        Some((r, c, v)) => Err(RacahError::Structure(format!(
            "residual is not in span{{K, Id}}: entry ({r}, {c}) is off by {}",
            format_scalar(&v)
        ))),
    }
}

/// Structure constants of the two classical presentations at `n = 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalPresentation {
    pub d: ExactScalar,
    pub e1: ExactScalar,
    pub e2: ExactScalar,
    pub i12: ExactScalar,
    pub i23: ExactScalar,
    pub i13: ExactScalar,
}

impl ClassicalPresentation {
    pub fn checks(&self) -> Vec<RelationCheck> {
        let sum = &self.i12 + &self.i23 + &self.i13;
        vec![
            RelationCheck::pass("classical K-presentation", vec![format!("d={}", format_scalar(&self.d))]),
            RelationCheck::pass("classical C-presentation", vec![]),
            RelationCheck::from_bool("classical i12+i23+i13=0", vec![], sum.is_zero(), || {
                format!("sum is {}", format_scalar(&sum))
            }),
        ]
    }
}

/// With `K1 = -C_A/2`, `K2 = -C_B/2` and `K3 = [K1, K2]`, finds `d`, `e1`, `e2` with
///
/// `[K2,K3] = K2^2 + {K1,K2} + d K2 + e1` and `[K3,K1] = K1^2 + {K1,K2} + d K1 + e2`,
///
/// and the scalars `i` of the presentation in `C_A`, `C_B`, `C_C` and `F = [C_A,C_B]/2`,
/// where `C` is the remaining pair. A residual outside the required span, or two
/// different values of `d`, is a structure error.
pub fn verify_classical_presentation(
    table: &GeneratorTable,
    a: &LabelSet,
    b: &LabelSet,
) -> Result<ClassicalPresentation> {
    if table.params.n() != 3 {
        return Err(RacahError::Structure("the classical presentation needs n = 3".into()));
    }
    let pairs = [LabelSet(vec![1, 2]), LabelSet(vec![2, 3]), LabelSet(vec![1, 3])];
    if a == b || !pairs.contains(a) || !pairs.contains(b) {
        return Err(RacahError::Structure(format!(
            "need two distinct two-element subsets of {{1,2,3}}, got {a} and {b}"
        )));
    }
    let third = pairs.iter().find(|p| *p != a && *p != b).expect("three pairs");
    let (c_a, c_b, c_c) = (table.get(a)?, table.get(b)?, table.get(third)?);

    let minus_half = crate::scalar::rat(-1, 2);
    let k1 = c_a.scale(&minus_half);
    let k2 = c_b.scale(&minus_half);
    let k3 = k1.commutator(&k2)?;
    let anti = k1.anticommutator(&k2)?;
    let first = k2.commutator(&k3)?.try_sub(&k2.compose(&k2)?)?.try_sub(&anti)?;
    let second = k3.commutator(&k1)?.try_sub(&k1.compose(&k1)?)?.try_sub(&anti)?;
    let (d, e1) = fit_span(&first, &k2)?;
    let (d2, e2) = fit_span(&second, &k1)?;
    if d != d2 {
        return Err(RacahError::Structure(format!(
            "the two relations need different d: {} and {}",
            format_scalar(&d),
            format_scalar(&d2)
        )));
    }

    let f = c_a.commutator(c_b)?.scale(&crate::scalar::rat(1, 2));
    let scalar_residual = |lhs: OperatorMatrix, rhs: OperatorMatrix, label: &str| -> Result<ExactScalar> {
        lhs.try_sub(&rhs)?.as_scalar().ok_or_else(|| {
            RacahError::Structure(format!("the {label} residual is not a multiple of the identity"))
        })
    };
    let i12 = scalar_residual(
        c_a.commutator(&f)?,
        c_b.compose(c_a)?.try_sub(&c_a.compose(c_c)?)?,
        "first",
    )?;
    let i23 = scalar_residual(
        c_b.commutator(&f)?,
        c_c.compose(c_b)?.try_sub(&c_b.compose(c_a)?)?,
        "second",
    )?;
    let i13 = scalar_residual(
        c_c.commutator(&f)?,
        c_a.compose(c_c)?.try_sub(&c_c.compose(c_b)?)?,
        "third",
    )?;
    Ok(ClassicalPresentation { d, e1, e2, i12, i23, i13 })
}

/// Number of `m` in `N^parts` with `|m| = total`.
fn compositions(parts: usize, total: u32) -> u64 {
    if parts == 0 {
        return u64::from(total == 0);
    }
    let (n, k) = (total as u64 + parts as u64 - 1, parts as u64 - 1);
    (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i)
}

/// Predicted eigenvalues of `C_[p..q]` with multiplicities:
/// `kappa(s, beta_{q-1} - beta_{p-2} - 1)` for `s = 0..N`.
pub fn expected_spectrum(p: usize, q: usize, params: &ParameterSet) -> Result<Vec<(ExactScalar, u64)>> {
    let n = params.n();
    if p == 0 || p > q || q > n {
        return Err(RacahError::Range(format!("[{p}..{q}] is not an interval in {{1..{n}}}")));
    }
    let shift = params.beta(q as isize - 1) - params.beta(p as isize - 2) - int(1);
    let mut out: Vec<(ExactScalar, u64)> = Vec::new();
    for s in 0..=params.big_n() {
        let mult = compositions(q - p, s) * compositions(n - 1 - (q - p), params.big_n() - s);
        if mult == 0 {
            continue;
        }
        let value = kappa(&int(s as i64), &shift);
        match out.iter_mut().find(|(v, _)| *v == value) {
            Some((_, m)) => *m += mult,
            None => out.push((value, mult)),
        }
    }
    Ok(out)
}

/// Divides the characteristic polynomial by every predicted factor.
pub fn match_spectrum(charpoly: &[ExactScalar], expected: &[(ExactScalar, u64)]) -> Result<()> {
    let mut poly = charpoly.to_vec();
    let mut missing = Vec::new();
    for (value, mult) in expected {
        for taken in 0..*mult {
            match divide_by_root(&poly, value) {
                Some(q) => poly = q,
                None => {
                    missing.push(format!("{} (x{})", format_scalar(value), mult - taken));
                    break;
                }
            }
        }
    }
    let leftover_degree = poly.len() - 1;
    if missing.is_empty() && leftover_degree == 0 && poly[0].is_one() {
        return Ok(());
    }
    Err(RacahError::SpectrumMismatch(format!(
        "missing [{}]; {leftover_degree} eigenvalue(s) not predicted",
        missing.join(", ")
    )))
}

/// Exact characteristic-polynomial check of the spectrum of `C_[p..q]`.
pub fn verify_spectrum(p: usize, q: usize, table: &GeneratorTable) -> Result<RelationCheck> {
    let expected = expected_spectrum(p, q, &table.params)?;
    let label = LabelSet::interval(p, q)?;
    let charpoly = table.get(&label)?.characteristic_polynomial();
    Ok(match match_spectrum(&charpoly, &expected) {
        Ok(()) => RelationCheck::pass("spectrum", names(&[&label])),
        Err(e) => RelationCheck::fail("spectrum", names(&[&label]), e.to_string()),
    })
}

/// `-|k|_j (|k|_j - 1 + beta_{j+1} - beta_0)`, the eigenvalue of `L_j` on `R(k; .)`.
pub fn bispectral_eigenvalue(j: usize, k: &MultiIndexK, params: &ParameterSet) -> ExactScalar {
    let s = int(k.partial_sum(j) as i64);
    -(&s) * (&s - int(1) + params.beta(j as isize + 1) - params.beta(0))
}

/// `L_j R(k; .) = eigenvalue * R(k; .)` for every `k` and `j`, and `[L_i, L_j] = 0`.
pub fn verify_bispectral(params: &ParameterSet) -> Result<Vec<RelationCheck>> {
    let grid = SimplexGrid::new(params.clone());
    let dim = params.dim();
    let ops = (1..=dim)
        .map(|j| build_racah_operator(j, 0, params)?.realize(&grid))
        .collect::<Result<Vec<_>>>()?;
    let ks = grid.multi_indices();
    let vectors = ks
        .iter()
        .map(|k| racah_grid_vector(k, &grid))
        .collect::<Result<Vec<_>>>()?;

    let mut checks = Vec::new();
    for (idx, op) in ops.iter().enumerate() {
        let j = idx + 1;
        let failure = ks
            .par_iter()
            .zip(vectors.par_iter())
            .map(|(k, v)| -> Result<Option<String>> {
                let lambda = bispectral_eigenvalue(j, k, params);
                let image = op.mul_vec(v)?;
                Ok(image
                    .iter()
                    .zip(v)
                    .position(|(a, b)| *a != b * &lambda)
                    .map(|row| format!("k = {:?}, row {row}", k.entries())))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        let name = format!("bispectral L_{j}");
        checks.push(match failure {
            None => RelationCheck::pass(name, vec![format!("L_{j}")]),
            Some(w) => RelationCheck::fail(name, vec![format!("L_{j}")], w),
        });
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let residual = ops[i].commutator(&ops[j])?;
            checks.push(RelationCheck::zero_residual(
                "commuting L",
                vec![format!("L_{}", i + 1), format!("L_{}", j + 1)],
                &residual,
            ));
        }
    }
    Ok(checks)
}

/// At `n = 3`: the general `L_1` equals the closed-form two-term operator, and
/// `C_23 r_k = kappa(k, beta_2 - beta_0 - 1) r_k` for the univariate Racah vectors
/// `r_k(beta_1-beta_0-1, beta_2-beta_1-1, -N-1, beta_1+N; x)`.
pub fn verify_specialization(params: &ParameterSet) -> Result<Vec<RelationCheck>> {
    if params.n() != 3 {
        return Err(RacahError::Structure("the rank-one specialization needs n = 3".into()));
    }
    let grid = SimplexGrid::new(params.clone());
    let general = build_racah_operator(1, 0, params)?.realize(&grid)?;
    let explicit = rank_one_operator(params)?.realize(&grid)?;
    let mut checks = vec![RelationCheck::zero_residual(
        "specialization L_1",
        vec!["L_1".into()],
        &general.try_sub(&explicit)?,
    )];

    let c23 = interval_operator(2, 3, params)?.realize(&grid)?;
    let b = params.betas();
    let big_n = params.big_n() as i64;
    let alpha = &b[1] - &b[0] - int(1);
    let beta = &b[2] - &b[1] - int(1);
    let gamma = int(-big_n - 1);
    let delta = &b[1] + int(big_n);
    let shift = &b[2] - &b[0] - int(1);
    for k in 0..=params.big_n() {
        let v: Vec<ExactScalar> = (0..=big_n)
            .map(|x| racah_univariate(k, &alpha, &beta, &gamma, &delta, &int(x)))
            .collect();
        let lambda = kappa(&int(k as i64), &shift);
        let image = c23.mul_vec(&v)?;
        let bad = image.iter().zip(&v).position(|(a, b)| *a != b * &lambda);
        checks.push(RelationCheck::from_bool(
            "specialization eigenvector",
            vec!["C{2,3}".into(), format!("k={k}")],
            bad.is_none(),
            || format!("row {}", bad.unwrap_or_default()),
        ));
    }
    Ok(checks)
}

/// Offset construction of `L_j` against substitution into the offset-zero operator.
pub fn verify_shift_covariance(params: &ParameterSet, cases: &[(usize, usize)]) -> Result<Vec<RelationCheck>> {
    let grid = SimplexGrid::new(params.clone());
    cases
        .iter()
        .map(|&(j, offset)| {
            let direct = build_racah_operator(j, offset, params)?.realize(&grid)?;
            let substituted = build_racah_operator(j, 0, params)?
                .substitute_offset(offset)?
                .realize(&grid)?;
            Ok(RelationCheck::zero_residual(
                "shift covariance",
                vec![format!("L_{j}"), format!("offset={offset}")],
                &direct.try_sub(&substituted)?,
            ))
        })
        .collect()
}
