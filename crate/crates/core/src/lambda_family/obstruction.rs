//! The sum of ten functor equations for a hypothetical A∞-morphism from the
//! minimal model `A` to the cohomology ring of a genus-3 surface.
//!
//! For a tuple `(i,j,k,l)` the equation reads
//!
//! ```text
//! F¹(μ⁴(b_i,b_j,b_k,b_l)) = F³(b_i,b_j,b_k)∪F¹(b_l) + F¹(b_i)∪F³(b_j,b_k,b_l)
//!                         + F²(b_i,b_j)∪F²(b_k,b_l)
//!                         + F³(μ²(b_i,b_j),b_k,b_l) + F³(b_i,μ²(b_j,b_k),b_l)
//!                         + F³(b_i,b_j,μ²(b_k,b_l))
//! ```
//!
//! Summed over the cyclic rotations of `(1,2,5,4)`, `(1,5,2,4)` and
//! `(2,5,2,5)`, the left side is a multiple of `F¹(a0)`. The right side is
//! reduced symbolically (graded commutativity, cancellation, vanishing of odd
//! squares) and also evaluated on random degree-correct assignments.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{minimal_model, KnotParams, A_INDEX_A0};
use crate::ainfty::{superscript, vector_string, AInfinityAlgebra, GradedBasis, MorphismCandidate, Vector};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Cyclic rotations of `(1,2,5,4)`, `(1,5,2,4)` and `(2,5,2,5)`.
pub const TEN_TUPLES: [[usize; 4]; 10] = [
    [1, 2, 5, 4],
    [2, 5, 4, 1],
    [5, 4, 1, 2],
    [4, 1, 2, 5],
    [1, 5, 2, 4],
    [5, 2, 4, 1],
    [2, 4, 1, 5],
    [4, 1, 5, 2],
    [2, 5, 2, 5],
    [5, 2, 5, 2],
];

/// A graded-commutative cohomology ring of a closed surface: basis `1`,
/// `x_1, y_1, …, x_g, y_g`, `ν`, with `x_i ∪ y_i = ν = −y_i ∪ x_i`.
#[derive(Clone, Debug)]
pub struct TargetRing {
    field: Field,
    names: Vec<String>,
    degrees: Vec<i64>,
    cup: BTreeMap<(usize, usize), Vector>,
}

impl TargetRing {
    pub fn surface(genus: usize, field: Field) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidGenus(genus));
        }
        let mut names = vec!["1".to_string()];
        let mut degrees = vec![0];
        for j in 1..=genus {
            names.push(format!("x{j}"));
            names.push(format!("y{j}"));
            degrees.extend([1, 1]);
        }
        names.push("nu".into());
        degrees.push(2);
        let top = names.len() - 1;
        let mut cup = BTreeMap::new();
        for i in 0..names.len() {
            cup.insert((0, i), Vector::basis(i, field));
            cup.insert((i, 0), Vector::basis(i, field));
        }
        for j in 0..genus {
            let (x, y) = (1 + 2 * j, 2 + 2 * j);
            cup.insert((x, y), Vector::basis(top, field));
            cup.insert((y, x), Vector::term(top, field.from_i64(-1)));
        }
        Ok(TargetRing {
            field,
            names,
            degrees,
            cup,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn graded_piece(&self, degree: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == degree).collect()
    }

    pub fn has_degree(&self, degree: i64) -> bool {
        self.degrees.contains(&degree)
    }

    pub fn cup(&self, u: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if let Some(w) = self.cup.get(&(i, j)) {
                    out.add_scaled(w, &(a * b));
                }
            }
        }
        out
    }

    pub fn vector_string(&self, v: &Vector) -> String {
        vector_string(v, |i| self.names[i].clone())
    }
}

impl GradedBasis for TargetRing {
    fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub elements_checked: u64,
    pub exhaustive: bool,
    pub failures: u64,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks `x ∪ x = 0` on the degree-1 part: exhaustively over a small finite
/// field, otherwise on basis squares and symmetrized basis pairs.
pub fn square_vanishing(ring: &TargetRing) -> SquareReport {
    let h1 = ring.graded_piece(1);
    let n = h1.len() as u32;
    let f = ring.field();
    let exhaustive_size = f.order().and_then(|q| q.checked_pow(n)).filter(|&m| m <= 1 << 20);
    if let Some(total) = exhaustive_size {
        let q = f.order().expect("finite field");
        let failures = (0..total)
            .into_par_iter()
            .filter(|&code| {
                let mut c = code;
                let mut v = Vector::new();
                for &b in &h1 {
                    v.add_term(b, f.from_i64((c % q) as i64));
                    c /= q;
                }
                !ring.cup(&v, &v).is_zero()
            })
            .count() as u64;
        return SquareReport {
            elements_checked: total,
            exhaustive: true,
            failures,
        };
    }
    let mut failures = 0;
    let mut checked = 0;
    for (k, &i) in h1.iter().enumerate() {
        for &j in &h1[k..] {
            let (ei, ej) = (Vector::basis(i, f), Vector::basis(j, f));
            let mut s = ring.cup(&ei, &ej);
            if i != j {
                s.add_scaled(&ring.cup(&ej, &ei), &f.one());
            }
            checked += 1;
            if !s.is_zero() {
                failures += 1;
            }
        }
    }
    SquareReport {
        elements_checked: checked,
        exhaustive: false,
        failures,
    }
}

/// Multilinear extension of `F^d` to vector arguments.
fn f_eval(f: &MorphismCandidate, args: &[&Vector]) -> Vector {
    fn rec(f: &MorphismCandidate, args: &[&Vector], idx: &mut Vec<usize>, c: Scalar, out: &mut Vector) {
        if idx.len() == args.len() {
            if let Some(v) = f.get(idx) {
                out.add_scaled(v, &c);
            }
            return;
        }
        for (i, a) in args[idx.len()].iter() {
            idx.push(i);
            rec(f, args, idx, &c * a, out);
            idx.pop();
        }
    }
    let mut out = Vector::new();
    rec(f, args, &mut Vec::new(), f.field().one(), &mut out);
    out
}

fn b(i: usize) -> usize {
    super::a_index_of_b(i)
}

fn equation_unchecked(
    a: &AInfinityAlgebra,
    h: &TargetRing,
    f: &MorphismCandidate,
    t: [usize; 4],
) -> (Vector, Vector) {
    let field = a.field();
    let [i, j, k, l] = t.map(b);
    let e = |x: usize| Vector::basis(x, field);
    let (ei, ej, ek, el) = (e(i), e(j), e(k), e(l));
    let mu2 = |x: usize, y: usize| a.product(&[x, y]).cloned().unwrap_or_default();
    let lhs = f_eval(f, &[&a.product(&[i, j, k, l]).cloned().unwrap_or_default()]);
    let one = field.one();
    let mut rhs = Vector::new();
    rhs.add_scaled(&h.cup(&f_eval(f, &[&ei, &ej, &ek]), &f_eval(f, &[&el])), &one);
    rhs.add_scaled(&h.cup(&f_eval(f, &[&ei]), &f_eval(f, &[&ej, &ek, &el])), &one);
    rhs.add_scaled(&h.cup(&f_eval(f, &[&ei, &ej]), &f_eval(f, &[&ek, &el])), &one);
    rhs.add_scaled(&f_eval(f, &[&mu2(i, j), &ek, &el]), &one);
    rhs.add_scaled(&f_eval(f, &[&ei, &mu2(j, k), &el]), &one);
    rhs.add_scaled(&f_eval(f, &[&ei, &ej, &mu2(k, l)]), &one);
    (lhs, rhs)
}

/// Both sides of the functor equation for `(b_i, b_j, b_k, b_l)`, given as
/// `b`-subscripts `1..=6`.
pub fn functor_equation_eval(
    a: &AInfinityAlgebra,
    h: &TargetRing,
    f: &MorphismCandidate,
    tuple: [usize; 4],
) -> Result<(Vector, Vector)> {
    if tuple.iter().any(|&i| !(1..=6).contains(&i)) {
        return Err(Error::BasisMismatch(format!("{tuple:?} is not a tuple of b-subscripts")));
    }
    f.check_degrees(a, h)?;
    Ok(equation_unchecked(a, h, f, tuple))
}

/// A formal term of the right-hand side: `F^d(args)` or `F^d(args) ∪ F^e(args)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormalTerm {
    F(Vec<usize>),
    Cup(Vec<usize>, Vec<usize>),
}

pub struct TermDisplay<'a> {
    term: &'a FormalTerm,
    a: &'a AInfinityAlgebra,
}

impl FormalTerm {
    pub fn display<'a>(&'a self, a: &'a AInfinityAlgebra) -> TermDisplay<'a> {
        TermDisplay { term: self, a }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |args: &[usize]| {
            let names: Vec<&str> = args.iter().map(|&i| self.a.name(i)).collect();
            format!("F{}({})", superscript(args.len()), names.join(", "))
        };
        match self.term {
            FormalTerm::F(x) => write!(f, "{}", one(x)),
            FormalTerm::Cup(x, y) => write!(f, "{} ∪ {}", one(x), one(y)),
        }
    }
}

fn f_degree(a: &AInfinityAlgebra, args: &[usize]) -> i64 {
    args.iter().map(|&i| a.degree(i)).sum::<i64>() + 1 - args.len() as i64
}

/// The unreduced formal sum of the ten right-hand sides.
pub fn symbolic_rhs_sum(a: &AInfinityAlgebra) -> BTreeMap<FormalTerm, Scalar> {
    let field = a.field();
    let mut sum: BTreeMap<FormalTerm, Scalar> = BTreeMap::new();
    let mut add = |t: FormalTerm, c: Scalar| {
        let e = sum.entry(t).or_insert_with(|| field.zero());
        *e = &*e + &c;
    };
    for t in TEN_TUPLES {
        let [i, j, k, l] = t.map(b);
        add(FormalTerm::Cup(vec![i, j, k], vec![l]), field.one());
        add(FormalTerm::Cup(vec![i], vec![j, k, l]), field.one());
        add(FormalTerm::Cup(vec![i, j], vec![k, l]), field.one());
        for (m, c) in a.product(&[i, j]).into_iter().flat_map(|v| v.iter()) {
            add(FormalTerm::F(vec![m, k, l]), c.clone());
        }
        for (m, c) in a.product(&[j, k]).into_iter().flat_map(|v| v.iter()) {
            add(FormalTerm::F(vec![i, m, l]), c.clone());
        }
        for (m, c) in a.product(&[k, l]).into_iter().flat_map(|v| v.iter()) {
            add(FormalTerm::F(vec![i, j, m]), c.clone());
        }
    }
    sum.retain(|_, c| !c.is_zero());
    sum
}

/// Reduces a formal sum: terms of degrees absent from `h` vanish, cups are
/// reordered by graded commutativity, odd squares vanish (by antisymmetry
/// away from characteristic 2, by `squares_vanish` in characteristic 2).
pub fn reduce_formal(
    a: &AInfinityAlgebra,
    h: &TargetRing,
    terms: &BTreeMap<FormalTerm, Scalar>,
    squares_vanish: bool,
) -> BTreeMap<FormalTerm, Scalar> {
    let field = a.field();
    let char2 = field.characteristic() == 2;
    let mut out: BTreeMap<FormalTerm, Scalar> = BTreeMap::new();
    for (t, c) in terms {
        let (t, c) = match t {
            FormalTerm::F(x) => {
                if !h.has_degree(f_degree(a, x)) {
                    continue;
                }
                (t.clone(), c.clone())
            }
            FormalTerm::Cup(x, y) => {
                let (dx, dy) = (f_degree(a, x), f_degree(a, y));
                if !h.has_degree(dx) || !h.has_degree(dy) || !h.has_degree(dx + dy) {
                    continue;
                }
                if x == y && dx % 2 != 0 && (!char2 || squares_vanish) {
                    continue;
                }
                if y < x {
                    (FormalTerm::Cup(y.clone(), x.clone()), c * &field.sign(dx * dy))
                } else {
                    (t.clone(), c.clone())
                }
            }
        };
        let e = out.entry(t).or_insert_with(|| field.zero());
        *e = &*e + &c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// The residual stated for characteristic ≠ 2:
/// `2(−1)^p (F³(a0,b2,b5) + F³(b2,a0,b5) + F³(b2,b5,a0))`.
pub fn reference_residual(params: &KnotParams, field: Field) -> BTreeMap<FormalTerm, Scalar> {
    let c = &field.from_i64(2) * &field.sign(params.p as i64);
    let (a0, b2, b5) = (A_INDEX_A0, b(2), b(5));
    let mut out = BTreeMap::new();
    for args in [vec![a0, b2, b5], vec![b2, a0, b5], vec![b2, b5, a0]] {
        out.insert(FormalTerm::F(args), c.clone());
    }
    out.retain(|_, c: &mut Scalar| !c.is_zero());
    out
}

fn eval_formal(h: &TargetRing, f: &MorphismCandidate, terms: &BTreeMap<FormalTerm, Scalar>) -> Vector {
    let mut out = Vector::new();
    for (t, c) in terms {
        let v = match t {
            FormalTerm::F(x) => f.get(x).cloned().unwrap_or_default(),
            FormalTerm::Cup(x, y) => {
                let fx = f.get(x).cloned().unwrap_or_default();
                let fy = f.get(y).cloned().unwrap_or_default();
                h.cup(&fx, &fy)
            }
        };
        out.add_scaled(&v, c);
    }
    out
}

fn random_in_degree(h: &TargetRing, degree: i64, rng: &mut ChaCha8Rng) -> Vector {
    let f = h.field();
    let mut v = Vector::new();
    for i in h.graded_piece(degree) {
        let c = match f.order() {
            Some(q) => rng.random_range(0..q) as i64,
            None => rng.random_range(-3..=3),
        };
        v.add_term(i, f.from_i64(c));
    }
    v
}

/// A random degree-correct assignment of `F¹` on `a0, b1..b6`, `F²` on
/// `b`-pairs and `F³` on `b`-triples and triples with one `a0`.
pub fn random_candidate(a: &AInfinityAlgebra, h: &TargetRing, seed: u64, stream: u64) -> MorphismCandidate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut f = MorphismCandidate::new(a.field());
    let bs: Vec<usize> = (1..=6).map(b).collect();
    let mut put = |args: Vec<usize>, rng: &mut ChaCha8Rng| {
        let v = random_in_degree(h, f_degree(a, &args), rng);
        f.set(&args, v);
    };
    put(vec![A_INDEX_A0], &mut rng);
    for &x in &bs {
        put(vec![x], &mut rng);
    }
    for &x in &bs {
        for &y in &bs {
            put(vec![x, y], &mut rng);
        }
    }
    for &x in &bs {
        for &y in &bs {
            for &z in &bs {
                put(vec![x, y, z], &mut rng);
            }
            put(vec![A_INDEX_A0, x, y], &mut rng);
            put(vec![x, A_INDEX_A0, y], &mut rng);
            put(vec![x, y, A_INDEX_A0], &mut rng);
        }
    }
    f
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub params: KnotParams,
    pub field: Field,
    /// `Σ lhs = c · F¹(a0)`: the coefficient `c`.
    pub lhs_coefficient: Scalar,
    pub lhs_expected: Scalar,
    /// Components of `Σ μ⁴` other than `a0` (expected empty).
    pub lhs_other_terms: String,
    pub samples: usize,
    pub seed: u64,
    /// Samples where `Σ rhs(F)` differs from the symbolic residual evaluated at `F`.
    pub rhs_random_failures: u64,
    pub squares: SquareReport,
    pub symbolic_residual: Vec<String>,
    pub reference_residual: Vec<String>,
    pub residual_matches_reference: bool,
    /// `Some(true)`: no quasi-isomorphism with `F¹(a0) ≠ 0`. Withheld outside
    /// characteristic 2.
    pub verdict: Option<bool>,
}

impl ObstructionReport {
    pub fn lhs_matches(&self) -> bool {
        self.lhs_coefficient == self.lhs_expected && self.lhs_other_terms == "0"
    }
}

fn render(a: &AInfinityAlgebra, terms: &BTreeMap<FormalTerm, Scalar>) -> Vec<String> {
    terms
        .iter()
        .map(|(t, c)| format!("{c} * {}", t.display(a)))
        .collect()
}

/// Runs the lhs computation, the random evaluation and the symbolic reduction.
pub fn obstruction_check(
    params: &KnotParams,
    field: Field,
    samples: usize,
    seed: u64,
) -> Result<ObstructionReport> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let transfer = minimal_model(params, field, 4)?;
    let a = &transfer.minimal;
    let h = TargetRing::surface(3, field)?;

    let mut lhs = Vector::new();
    for t in TEN_TUPLES {
        if let Some(v) = a.product(&t.map(b)) {
            lhs.add_scaled(v, &field.one());
        }
    }
    let lhs_coefficient = lhs.get(A_INDEX_A0).cloned().unwrap_or_else(|| field.zero());
    let mut others = lhs.clone();
    others.add_term(A_INDEX_A0, -&lhs_coefficient);

    let squares = square_vanishing(&h);
    let residual = reduce_formal(a, &h, &symbolic_rhs_sum(a), squares.passed());
    let expected_residual = reference_residual(params, field);

    let failures = (0..samples as u64)
        .into_par_iter()
        .filter(|&i| {
            let f = random_candidate(a, &h, seed, i);
            let mut total = Vector::new();
            for t in TEN_TUPLES {
                let (_, rhs) = equation_unchecked(a, &h, &f, t);
                total.add_scaled(&rhs, &field.one());
            }
            total != eval_formal(&h, &f, &residual)
        })
        .count() as u64;

    let char2 = field.characteristic() == 2;
    let verdict = char2.then(|| {
        lhs_coefficient.inverse().is_some() && residual.is_empty() && failures == 0 && squares.passed()
    });
    Ok(ObstructionReport {
        params: *params,
        field,
        lhs_expected: field.sign(params.p as i64 + 1),
        lhs_coefficient,
        lhs_other_terms: a.vector_string(&others),
        samples,
        seed,
        rhs_random_failures: failures,
        squares,
        symbolic_residual: render(a, &residual),
        reference_residual: render(a, &expected_residual),
        residual_matches_reference: residual == expected_residual,
        verdict,
    })
}
