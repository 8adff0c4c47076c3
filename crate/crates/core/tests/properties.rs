use proptest::prelude::*;

use cedga_core::dga::{change_generators, elementary_automorphism, linear_part, verify_dga};
use cedga_core::dgaparse::{parse, serialize};
use cedga_core::lambda_family::{self as lf, KnotParams, TargetRing};
use cedga_core::linalg::Matrix;
use cedga_core::surface::build_h;
use cedga_core::{Alphabet, Augmentation, Field, FreeDga, GenId, NCPoly, Scalar, Vector, Word};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::F2),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(7).unwrap()),
        Just(Field::Rationals),
    ]
}

fn scalar(field: Field, num: i64, den: i64) -> Scalar {
    if field == Field::Rationals {
        field.from_i64(num).checked_div(&field.from_i64(den)).unwrap()
    } else {
        field.from_i64(num)
    }
}

/// Terms `(num, den, word)` over `n` generators.
fn raw_poly(n: u32) -> impl Strategy<Value = Vec<(i64, i64, Vec<u32>)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3, prop::collection::vec(0..n, 0..4)), 0..5)
}

fn poly(field: Field, raw: &[(i64, i64, Vec<u32>)]) -> NCPoly {
    NCPoly::from_terms(
        field,
        raw.iter()
            .map(|(a, b, w)| (scalar(field, *a, *b), Word::new(w.iter().map(|&i| GenId(i)).collect()))),
    )
}

fn lambda(field: Field) -> FreeDga {
    lf::build_ce_dga(&KnotParams::new(2, 2, 3, 3).unwrap(), field).unwrap()
}

fn word_poly(field: Field, letters: &[u32]) -> NCPoly {
    NCPoly::monomial(Word::new(letters.iter().map(|&i| GenId(i)).collect()), field.one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn multiplication_is_associative_and_unital(
        field in field_strategy(),
        a in raw_poly(3), b in raw_poly(3), c in raw_poly(3),
    ) {
        let (a, b, c) = (poly(field, &a), poly(field, &b), poly(field, &c));
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let one = NCPoly::one(field);
        prop_assert_eq!(&one.multiply(&a).unwrap(), &a);
        prop_assert_eq!(&a.multiply(&one).unwrap(), &a);
        let distributed = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(a.multiply(&b.add(&c).unwrap()).unwrap(), distributed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn char_two_reduction_commutes_with_multiplication(
        a in prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..3, 0..4)), 0..5),
        b in prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..3, 0..4)), 0..5),
    ) {
        let q = Field::Rationals;
        let lift = |raw: &[(i64, Vec<u32>)]| {
            NCPoly::from_terms(q, raw.iter().map(|(c, w)| (q.from_i64(*c), Word::new(w.iter().map(|&i| GenId(i)).collect()))))
        };
        let (a, b) = (lift(&a), lift(&b));
        let reduced = a.multiply(&b).unwrap().reduce_to(Field::F2).unwrap();
        let product = a.reduce_to(Field::F2).unwrap().multiply(&b.reduce_to(Field::F2).unwrap()).unwrap();
        prop_assert_eq!(reduced, product);
    }

    #[test]
    fn differential_is_a_square_zero_derivation(
        rational in any::<bool>(),
        x in prop::collection::vec(0u32..35, 1..4),
        y in prop::collection::vec(0u32..35, 1..4),
    ) {
        let field = if rational { Field::Rationals } else { Field::F2 };
        let d = lambda(field);
        let al = d.alphabet();
        let (px, py) = (word_poly(field, &x), word_poly(field, &y));
        let dx = d.apply_differential(&px).unwrap();
        let dy = d.apply_differential(&py).unwrap();
        let deg_x: i64 = x.iter().map(|&i| al.degree(GenId(i)).unwrap()).sum();
        let leibniz = dx
            .multiply(&py)
            .unwrap()
            .add(&px.multiply(&dy).unwrap().scale(&field.sign(deg_x)))
            .unwrap();
        let xy = px.multiply(&py).unwrap();
        prop_assert_eq!(d.apply_differential(&xy).unwrap(), leibniz);
        prop_assert!(d.apply_differential(&d.apply_differential(&xy).unwrap()).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Tame automorphisms `g ↦ g + c·w` with `w` decomposable leave the
    /// linearized homology unchanged.
    #[test]
    fn linearized_homology_is_invariant(
        rational in any::<bool>(),
        steps in prop::collection::vec((0u32..35, prop::collection::vec(0u32..35, 2..4), 1i64..4), 1..4),
    ) {
        let field = if rational { Field::Rationals } else { Field::F2 };
        let k = KnotParams::new(2, 2, 3, 3).unwrap();
        let t = lf::twisted_dga(&k, field).unwrap();
        let before = linear_part(&t).unwrap().homology_dims();
        let mut d = t.clone();
        let mut applied = 0;
        for (g, w, c) in steps {
            let al = d.alphabet();
            let word = Word::new(w.iter().map(|&i| GenId(i)).collect());
            if w.contains(&g) || al.word_degree(&word).unwrap() != al.degree(GenId(g)).unwrap() {
                continue;
            }
            let (phi, inv) = elementary_automorphism(&d, GenId(g), word, field.from_i64(c)).unwrap();
            d = change_generators(&d, &phi, &inv).unwrap();
            applied += 1;
        }
        prop_assume!(applied > 0);
        prop_assert!(verify_dga(&d).passed());
        prop_assert_eq!(linear_part(&d).unwrap().homology_dims(), before);
    }

    #[test]
    fn parse_inverts_serialize(
        field in field_strategy(),
        degrees in prop::collection::vec(-3i64..=3, 1..6),
        diffs in prop::collection::vec(raw_poly(6), 6),
        aug in prop::collection::vec(-3i64..=3, 6),
        with_aug in any::<bool>(),
    ) {
        let n = degrees.len();
        let mut al = Alphabet::new();
        for (i, deg) in degrees.iter().enumerate() {
            al.push(format!("g{i}_{}", i * 7 % 5), *deg).unwrap();
        }
        let polys: Vec<NCPoly> = diffs[..n]
            .iter()
            .map(|raw| {
                let kept: Vec<_> = raw.iter().filter(|(_, _, w)| w.iter().all(|&i| (i as usize) < n)).cloned().collect();
                poly(field, &kept)
            })
            .collect();
        let d = FreeDga::new(field, al, polys).unwrap();
        let eps = with_aug.then(|| Augmentation::new(aug[..n].iter().map(|&v| field.from_i64(v)).collect()));
        let text = serialize(&d, eps.as_ref());
        let doc = parse(&text).unwrap();
        prop_assert_eq!(&doc.dga, &d);
        let restored = doc.augmentation.clone().unwrap_or_else(|| Augmentation::zero(field, n));
        prop_assert_eq!(restored, eps.unwrap_or_else(|| Augmentation::zero(field, n)));
        prop_assert_eq!(serialize(&doc.dga, doc.augmentation.as_ref()), text);
    }

    #[test]
    fn rank_plus_nullity(
        field in field_strategy(),
        rows in 1usize..7,
        cols in 1usize..7,
        entries in prop::collection::vec((-3i64..=3, 1i64..=2), 36),
    ) {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let (a, b) = entries[i * 6 + j];
                m.set(i, j, scalar(field, a, b));
            }
        }
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        let basis: Vec<Vector> = kernel
            .iter()
            .map(|v| Vector::from_terms(v.iter().cloned().enumerate()))
            .collect();
        let k = Matrix::from_columns(field, cols, &basis);
        prop_assert!(kernel.is_empty() || m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), kernel.len());
    }
}

#[test]
fn rational_and_binary_pipelines_agree_mod_two() {
    for (p, r) in [(2, 3), (3, 4), (4, 5)] {
        let k = KnotParams::new(p, p, r, r).unwrap();
        let bq = lf::dual_algebra(&k, Field::Rationals).unwrap();
        let b2 = lf::dual_algebra(&k, Field::F2).unwrap();
        assert_eq!(bq.reduce_to(Field::F2).unwrap(), b2);
        let aq = lf::minimal_model(&k, Field::Rationals, 4).unwrap().minimal;
        let a2 = lf::minimal_model(&k, Field::F2, 4).unwrap().minimal;
        assert_eq!(aq.reduce_to(Field::F2).unwrap(), a2, "p = {p}");
    }
}

#[test]
fn surface_cohomology_matches_target_ring() {
    let h = build_h(3).unwrap();
    let ring = TargetRing::surface(3, Field::F2).unwrap();
    let to_h = |name: &str| match name {
        "1" => "e".to_string(),
        "nu" => "nu".to_string(),
        n if n.starts_with('x') => format!("phibar{}", &n[1..]),
        n => format!("psibar{}", &n[1..]),
    };
    assert_eq!(h.dim(), ring.dim());
    for i in 0..ring.dim() {
        for j in 0..ring.dim() {
            let cup = ring.cup(&Vector::basis(i, Field::F2), &Vector::basis(j, Field::F2));
            let expected: Vector = Vector::from_terms(
                cup.iter().map(|(k, c)| (h.index_of(&to_h(ring.name(k))).unwrap(), c.clone())),
            );
            let (hi, hj) = (h.index_of(&to_h(ring.name(i))).unwrap(), h.index_of(&to_h(ring.name(j))).unwrap());
            assert_eq!(h.product(hi, hj), expected, "{} ∪ {}", ring.name(i), ring.name(j));
        }
    }
}
