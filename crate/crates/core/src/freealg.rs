//! The free graded unital associative algebra over a field.
//!
//! Elements are [`NCPoly`]s: finite linear combinations of [`Word`]s in the
//! generators of an [`Alphabet`]. Words are ordered first by length, then
//! lexicographically by generator id, which gives every polynomial a unique
//! canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub name: String,
    pub degree: i64,
}

/// An ordered list of graded generators with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    by_name: HashMap<String, GenId>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, degree: i64) -> Result<GenId> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        let id = GenId(self.gens.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.gens.push(Generator { id, name, degree });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, id: GenId) -> Result<&Generator> {
        self.gens.get(id.index()).ok_or(Error::UnknownGenerator(id.0))
    }

    pub fn id(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    /// Generator id by name; panics if absent. For tables that are known to
    /// refer to existing generators.
    pub fn expect_id(&self, name: &str) -> GenId {
        self.id(name)
            .unwrap_or_else(|| panic!("no generator named `{name}`"))
    }

    pub fn degree(&self, id: GenId) -> Result<i64> {
        Ok(self.get(id)?.degree)
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.gens[id.index()].name
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn word_degree(&self, word: &Word) -> Result<i64> {
        word.letters()
            .iter()
            .try_fold(0i64, |acc, g| Ok(acc + self.degree(*g)?))
    }
}

/// A finite sequence of generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<GenId>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<GenId>) -> Self {
        Word(letters)
    }

    pub fn letter(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree information for a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyDegree {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Homogeneous(i64),
    Mixed(BTreeSet<i64>),
}

/// A noncommutative polynomial in canonical form: no zero coefficients, words
/// sorted by length then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(field: Field) -> Self {
        NCPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(Word::unit(), c)
    }

    pub fn generator(field: Field, g: GenId) -> Self {
        Self::monomial(Word::letter(g), field.one())
    }

    pub fn monomial(word: Word, c: Scalar) -> Self {
        let mut p = NCPoly::zero(c.field());
        p.add_term(word, c);
        p
    }

    /// Builds a polynomial from `(coefficient, word)` pairs, combining repeats.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Scalar, Word)>) -> Self {
        let mut p = NCPoly::zero(field);
        for (c, w) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Word::unit())
    }

    /// Adds `c * w` in place, keeping the canonical form.
    pub fn add_term(&mut self, w: Word, c: Scalar) {
        assert_eq!(c.field(), self.field, "coefficient from a different field");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_field(&self, other: &NCPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.field);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    /// Concatenation product.
    pub fn multiply(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check_field(other)?;
        let mut out = NCPoly::zero(self.field);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Keeps only the words of length `len`.
    pub fn component(&self, len: usize) -> NCPoly {
        NCPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_word_length(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    pub fn degree(&self, alphabet: &Alphabet) -> Result<PolyDegree> {
        let mut degrees = BTreeSet::new();
        for w in self.terms.keys() {
            degrees.insert(alphabet.word_degree(w)?);
        }
        Ok(match degrees.len() {
            0 => PolyDegree::Zero,
            1 => PolyDegree::Homogeneous(*degrees.iter().next().unwrap()),
            _ => PolyDegree::Mixed(degrees),
        })
    }

    /// Image in another field under the canonical map (e.g. `Q -> F_2`).
    pub fn reduce_to(&self, target: Field) -> Result<NCPoly> {
        let mut out = NCPoly::zero(target);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.reduce_to(target)?);
        }
        Ok(out)
    }

    /// Human-readable rendering with generator names, e.g. `1 - x_2*y_2`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay {
            poly: self,
            alphabet,
        }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a NCPoly,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let field = self.poly.field;
        for (i, (w, c)) in self.poly.terms.iter().enumerate() {
            let neg = field == Field::Rationals && c.to_string().starts_with('-');
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let names: Vec<&str> = w.letters().iter().map(|g| self.alphabet.name(*g)).collect();
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", names.join("*"))?;
            } else {
                write!(f, "{mag}*{}", names.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A derivation of the free algebra, determined by its values on generators.
///
/// Extended by the graded Leibniz rule `D(xy) = D(x) y + (-1)^{|x|} x D(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    degree: i64,
    images: Vec<NCPoly>,
}

impl Derivation {
    pub fn zero(field: Field, num_generators: usize, degree: i64) -> Self {
        Derivation {
            degree,
            images: vec![NCPoly::zero(field); num_generators],
        }
    }

    pub fn new(degree: i64, images: Vec<NCPoly>) -> Self {
        Derivation { degree, images }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, g: GenId) -> Result<&NCPoly> {
        self.images.get(g.index()).ok_or(Error::UnknownGenerator(g.0))
    }

    pub fn set_image(&mut self, g: GenId, value: NCPoly) -> Result<()> {
        let slot = self
            .images
            .get_mut(g.index())
            .ok_or(Error::UnknownGenerator(g.0))?;
        *slot = value;
        Ok(())
    }

    pub fn images(&self) -> &[NCPoly] {
        &self.images
    }

    pub fn apply(&self, alphabet: &Alphabet, x: &NCPoly) -> Result<NCPoly> {
        let field = x.field();
        let mut out = NCPoly::zero(field);
        for (w, c) in x.terms() {
            let letters = w.letters();
            let mut prefix_degree = 0i64;
            for (i, g) in letters.iter().enumerate() {
                let dg = self.image(*g)?;
                if !dg.is_zero() {
                    let sign = field.sign(prefix_degree);
                    let coef = c * &sign;
                    let prefix = &letters[..i];
                    let suffix = &letters[i + 1..];
                    for (inner, ci) in dg.terms() {
                        let mut word = Vec::with_capacity(prefix.len() + inner.len() + suffix.len());
                        word.extend_from_slice(prefix);
                        word.extend_from_slice(inner.letters());
                        word.extend_from_slice(suffix);
                        out.add_term(Word::new(word), &coef * ci);
                    }
                }
                prefix_degree += alphabet.degree(*g)?;
            }
        }
        Ok(out)
    }
}

/// A unital algebra endomorphism of the free algebra, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    images: Vec<NCPoly>,
}

impl AlgebraMap {
    pub fn identity(field: Field, num_generators: usize) -> Self {
        AlgebraMap {
            images: (0..num_generators)
                .map(|i| NCPoly::generator(field, GenId(i as u32)))
                .collect(),
        }
    }

    pub fn new(images: Vec<NCPoly>) -> Self {
        AlgebraMap { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, g: GenId) -> Result<&NCPoly> {
        self.images.get(g.index()).ok_or(Error::UnknownGenerator(g.0))
    }

    pub fn set_image(&mut self, g: GenId, value: NCPoly) -> Result<()> {
        let slot = self
            .images
            .get_mut(g.index())
            .ok_or(Error::UnknownGenerator(g.0))?;
        *slot = value;
        Ok(())
    }

    pub fn apply(&self, x: &NCPoly) -> Result<NCPoly> {
        let field = x.field();
        let mut out = NCPoly::zero(field);
        for (w, c) in x.terms() {
            let mut acc = NCPoly::constant(c.clone());
            for g in w.letters() {
                acc = acc.multiply(self.image(*g)?)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMap) -> Result<AlgebraMap> {
        let images = other
            .images
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMap { images })
    }

    /// True when the map fixes every generator.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, p)| {
            *p == NCPoly::generator(p.field(), GenId(i as u32))
        })
    }
}
