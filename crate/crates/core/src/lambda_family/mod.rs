//! The knot family `Λ_{p,q,r,s}`: its Chekanov–Eliashberg DGA, the
//! augmentation sending every letter to `−1`, and the pipeline
//! twist → change of `a₀` → dual A∞-algebra → minimal model.
//!
//! Generator names: `a0`, `b1`…`b6`, `ax_i`, `ay_i`, `az_i`, `aw_i` and the
//! letters `x_i`, `y_i`, `z_i`, `w_i`.

mod obstruction;
pub mod reference;

pub use obstruction::{
    functor_equation_eval, obstruction_check, square_vanishing, symbolic_rhs_sum, FormalTerm,
    ObstructionReport, SquareReport, TargetRing, TEN_TUPLES,
};

use std::fmt;

use serde::Serialize;

use crate::ainfty::{dualize, AInfinityAlgebra, Vector};
use crate::dga::{change_generators, twist, Augmentation, FreeDga};
use crate::error::{Error, Result};
use crate::freealg::{AlgebraMap, Alphabet, NCPoly, Word};
use crate::scalar::Field;
use crate::transfer::{transfer_products, Contraction, Transfer};

pub const LETTERS: [char; 4] = ['x', 'y', 'z', 'w'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KnotParams {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
}

impl KnotParams {
    pub fn new(p: usize, q: usize, r: usize, s: usize) -> Result<Self> {
        if [p, q, r, s].iter().any(|&n| n < 2) {
            return Err(Error::InvalidParams(format!(
                "({p},{q},{r},{s}): every index must be at least 2"
            )));
        }
        if p % 2 != q % 2 || q % 2 == r % 2 || r % 2 != s % 2 {
            return Err(Error::InvalidParams(format!(
                "({p},{q},{r},{s}): need p ≡ q ≡ r+1 ≡ s+1 mod 2"
            )));
        }
        Ok(KnotParams { p, q, r, s })
    }

    /// The top index for letter `*` ∈ {x, y, z, w}.
    pub fn top(&self, letter: char) -> usize {
        match letter {
            'x' => self.p,
            'y' => self.q,
            'z' => self.r,
            'w' => self.s,
            _ => panic!("unknown letter `{letter}`"),
        }
    }

    pub fn num_generators(&self) -> usize {
        2 * (self.p + self.q + self.r + self.s + 4) + 7
    }

    pub fn p_is_even(&self) -> bool {
        self.p.is_multiple_of(2)
    }

    /// Degrees of `b1`…`b6` in the DGA.
    pub fn b_degrees(&self) -> [i64; 6] {
        let (p, q, r, s) = (self.p as i64, self.q as i64, self.r as i64, self.s as i64);
        [p - r + 1, q - r + 1, r - s, r - p - 1, r - q - 1, s - r]
    }
}

impl fmt::Display for KnotParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.p, self.q, self.r, self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalInvariants {
    pub rotation: i64,
    pub thurston_bennequin: i64,
    pub slice_genus: u32,
}

/// Recorded constants for the family; not derived from a diagram.
pub fn classical_invariants(_params: &KnotParams) -> ClassicalInvariants {
    ClassicalInvariants {
        rotation: 0,
        thurston_bennequin: 5,
        slice_genus: 3,
    }
}

pub fn letter_name(letter: char, i: usize) -> String {
    format!("{letter}_{i}")
}

pub fn chord_name(letter: char, i: usize) -> String {
    format!("a{letter}_{i}")
}

pub fn b_name(i: usize) -> String {
    format!("b{i}")
}

/// The alphabet in its fixed order: `a0`, `b1..b6`, then for each letter the
/// chords `a*_0..a*_n` followed by the letters `*_0..*_n`.
pub fn alphabet(params: &KnotParams) -> Alphabet {
    let mut al = Alphabet::new();
    let push = |al: &mut Alphabet, name: String, deg: i64| {
        al.push(name, deg).expect("family names are distinct");
    };
    push(&mut al, "a0".into(), 1);
    for (i, d) in params.b_degrees().iter().enumerate() {
        push(&mut al, b_name(i + 1), *d);
    }
    for l in LETTERS {
        for i in 0..=params.top(l) {
            push(&mut al, chord_name(l, i), 1);
        }
        for i in 0..=params.top(l) {
            push(&mut al, letter_name(l, i), 0);
        }
    }
    al
}

/// Builds a polynomial from `(coefficient, [names])` terms; `[]` is the unit.
pub(crate) fn poly(al: &Alphabet, field: Field, terms: &[(i64, Vec<String>)]) -> NCPoly {
    NCPoly::from_terms(
        field,
        terms.iter().map(|(c, names)| {
            let w = Word::new(names.iter().map(|n| al.expect_id(n)).collect());
            (field.from_i64(*c), w)
        }),
    )
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn build_ce_dga(params: &KnotParams, field: Field) -> Result<FreeDga> {
    let al = alphabet(params);
    let mut diffs = vec![NCPoly::zero(field); al.len()];
    let mut set = |name: &str, terms: Vec<(i64, Vec<String>)>| {
        diffs[al.expect_id(name).index()] = poly(&al, field, &terms);
    };
    let top = |l: char| letter_name(l, params.top(l));
    set(
        "a0",
        vec![
            (1, vec![]),
            (-1, vec![top('w'), top('z'), top('y'), top('x')]),
        ],
    );
    set(
        "ax_0",
        vec![(1, vec![]), (1, names(&["x_0"])), (1, names(&["b1", "b4"]))],
    );
    set(
        "ay_0",
        vec![(1, vec![]), (1, names(&["y_0"])), (1, names(&["b2", "b5"]))],
    );
    set(
        "az_0",
        vec![
            (1, vec![]),
            (1, names(&["z_0"])),
            (1, names(&["b4", "b1"])),
            (1, names(&["b5", "b2"])),
            (1, names(&["z_0", "b6", "b3"])),
            (1, names(&["b4", "b1", "b5", "b2"])),
        ],
    );
    set(
        "aw_0",
        vec![(1, vec![]), (1, names(&["w_0"])), (1, names(&["b3", "b6"]))],
    );
    for l in LETTERS {
        for i in 1..=params.top(l) {
            set(
                &chord_name(l, i),
                vec![
                    (1, vec![]),
                    (-1, vec![letter_name(l, i - 1), letter_name(l, i)]),
                ],
            );
        }
    }
    FreeDga::new(field, al, diffs)
}

pub fn canonical_augmentation(params: &KnotParams, field: Field) -> Augmentation {
    let al = alphabet(params);
    let mut eps = Augmentation::zero(field, al.len());
    for g in al.iter() {
        if g.degree == 0 && !g.name.starts_with('b') {
            eps.set(g.id, field.from_i64(-1));
        }
    }
    eps
}

/// The correction `S = Σ(−1)ⁱa^x_i + Σ(−1)ⁱa^y_i − Σ(−1)ⁱa^z_i − Σ(−1)ⁱa^w_i`.
fn correction(params: &KnotParams, al: &Alphabet, field: Field) -> NCPoly {
    let mut s = NCPoly::zero(field);
    for l in LETTERS {
        let outer = if l == 'x' || l == 'y' { 1 } else { -1 };
        for i in 0..=params.top(l) {
            let sign = if i % 2 == 0 { outer } else { -outer };
            s.add_term(Word::letter(al.expect_id(&chord_name(l, i))), field.from_i64(sign));
        }
    }
    s
}

/// The elementary transformation `ψ : a₀ ↦ a₀ − (−1)^p S` and its inverse
/// `a₀ ↦ a₀ + (−1)^p S`; all other generators are fixed.
pub fn a0_transformation(params: &KnotParams, field: Field) -> (AlgebraMap, AlgebraMap) {
    let al = alphabet(params);
    let a0 = al.expect_id("a0");
    let s = correction(params, &al, field).scale(&field.sign(params.p as i64));
    let x = NCPoly::generator(field, a0);
    let mut psi = AlgebraMap::identity(field, al.len());
    let mut inv = psi.clone();
    psi.set_image(a0, x.sub(&s).expect("same field")).expect("a0 exists");
    inv.set_image(a0, x.add(&s).expect("same field")).expect("a0 exists");
    (psi, inv)
}

pub fn twisted_dga(params: &KnotParams, field: Field) -> Result<FreeDga> {
    let d = build_ce_dga(params, field)?;
    twist(&d, &canonical_augmentation(params, field))
}

/// The twisted DGA after substituting the new generator `ψ(a₀)` for `a₀`,
/// i.e. `∂' = ψ⁻¹ ∘ ∂^ε ∘ ψ`.
pub fn transformed_dga(params: &KnotParams, field: Field) -> Result<FreeDga> {
    let t = twisted_dga(params, field)?;
    let (psi, inv) = a0_transformation(params, field);
    change_generators(&t, &inv, &psi)
}

/// `B`: the dual of the transformed DGA.
pub fn dual_algebra(params: &KnotParams, field: Field) -> Result<AInfinityAlgebra> {
    dualize(&transformed_dga(params, field)?)
}

/// B-index of a DGA generator.
pub fn b_index(b: &AInfinityAlgebra, name: &str) -> usize {
    b.expect_index(name)
}

/// A-part `{1, a0, b1..b6}` and `T¹(a*_i) = Σ_{k=i}^{n} (−1)^{k−i+1} *_k`.
pub fn standard_contraction(params: &KnotParams, b: AInfinityAlgebra) -> Result<Contraction> {
    if b.dim() != params.num_generators() + 1 {
        return Err(Error::BasisMismatch(format!(
            "expected {} basis elements for {params}, found {}",
            params.num_generators() + 1,
            b.dim()
        )));
    }
    let idx = |name: &str| {
        b.index_of(name)
            .ok_or_else(|| Error::BasisMismatch(format!("missing basis element `{name}`")))
    };
    let field = b.field();
    let mut a_part = vec![b.unit(), idx("a0")?];
    for i in 1..=6 {
        a_part.push(idx(&b_name(i))?);
    }
    let mut homotopy = vec![Vector::new(); b.dim()];
    for l in LETTERS {
        let n = params.top(l);
        for i in 0..=n {
            let mut t = Vector::new();
            for k in i..=n {
                t.add_term(idx(&letter_name(l, k))?, field.sign((k - i + 1) as i64));
            }
            homotopy[idx(&chord_name(l, i))?] = t;
        }
    }
    Contraction::new(b, a_part, homotopy)
}

/// The full pipeline up to the minimal model `A` and `F : A → B`.
pub fn minimal_model(params: &KnotParams, field: Field, max_arity: usize) -> Result<Transfer> {
    let b = dual_algebra(params, field)?;
    let c = standard_contraction(params, b)?;
    transfer_products(&c, max_arity)
}

/// A-index of `b_i` (1 ≤ i ≤ 6) in the minimal model; `a0` is index 1.
pub fn a_index_of_b(i: usize) -> usize {
    i + 1
}

pub const A_INDEX_A0: usize = 1;
