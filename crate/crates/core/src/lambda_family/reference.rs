//! Reference tables for the family, transcribed as data, and comparison
//! helpers against computed algebras.
//!
//! The one known transcription fix: the reference expansion of `∂^ε a0` is
//! written with `z_r x_p`, which is what conjugation produces.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{alphabet, b_name, chord_name, letter_name, poly, KnotParams, LETTERS};
use crate::ainfty::{AInfinityAlgebra, Vector};
use crate::dga::FreeDga;
use crate::error::Result;
use crate::scalar::Field;

/// One table row: `μ^d(args) = Σ coefficient · output`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub args: Vec<String>,
    pub value: Vec<(i64, String)>,
}

fn entry(args: &[String], value: &[(i64, String)]) -> TableEntry {
    TableEntry {
        args: args.to_vec(),
        value: value.to_vec(),
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The reference twisted differential `∂^ε`, as a DGA over `field`.
pub fn twisted_differential(params: &KnotParams, field: Field) -> Result<FreeDga> {
    let al = alphabet(params);
    let mut diffs = vec![crate::freealg::NCPoly::zero(field); al.len()];
    let top = |l: char| letter_name(l, params.top(l));
    let (w, z, y, x) = (top('w'), top('z'), top('y'), top('x'));
    let mut set = |name: &str, terms: Vec<(i64, Vec<String>)>| {
        diffs[al.expect_id(name).index()] = poly(&al, field, &terms);
    };
    set(
        "a0",
        vec![
            (1, vec![w.clone()]),
            (1, vec![z.clone()]),
            (1, vec![y.clone()]),
            (1, vec![x.clone()]),
            (-1, vec![w.clone(), z.clone()]),
            (-1, vec![w.clone(), y.clone()]),
            (-1, vec![w.clone(), x.clone()]),
            (-1, vec![z.clone(), y.clone()]),
            (-1, vec![z.clone(), x.clone()]),
            (-1, vec![y.clone(), x.clone()]),
            (1, vec![w.clone(), z.clone(), y.clone()]),
            (1, vec![w.clone(), z.clone(), x.clone()]),
            (1, vec![w.clone(), y.clone(), x.clone()]),
            (1, vec![z.clone(), y.clone(), x.clone()]),
            (-1, vec![w, z, y, x]),
        ],
    );
    set("ax_0", vec![(1, vec![s("x_0")]), (1, vec![s("b1"), s("b4")])]);
    set("ay_0", vec![(1, vec![s("y_0")]), (1, vec![s("b2"), s("b5")])]);
    set("aw_0", vec![(1, vec![s("w_0")]), (1, vec![s("b3"), s("b6")])]);
    set(
        "az_0",
        vec![
            (1, vec![s("z_0")]),
            (1, vec![s("b4"), s("b1")]),
            (1, vec![s("b5"), s("b2")]),
            (-1, vec![s("b6"), s("b3")]),
            (1, vec![s("z_0"), s("b6"), s("b3")]),
            (1, vec![s("b4"), s("b1"), s("b5"), s("b2")]),
        ],
    );
    for l in LETTERS {
        for i in 1..=params.top(l) {
            let (prev, cur) = (letter_name(l, i - 1), letter_name(l, i));
            set(
                &chord_name(l, i),
                vec![
                    (1, vec![prev.clone()]),
                    (1, vec![cur.clone()]),
                    (-1, vec![prev, cur]),
                ],
            );
        }
    }
    FreeDga::new(field, al, diffs)
}

/// The reference product table of `B`, excluding unit products.
pub fn dual_table(params: &KnotParams) -> Vec<TableEntry> {
    let p = params.p;
    let sp = sign(p);
    let a0 = s("a0");
    let mut t = Vec::new();
    for l in LETTERS {
        let n = params.top(l);
        for i in 0..n {
            t.push(entry(
                &[letter_name(l, i)],
                &[(1, chord_name(l, i)), (1, chord_name(l, i + 1))],
            ));
        }
        t.push(entry(&[letter_name(l, n)], &[(1, chord_name(l, n))]));
    }
    let b = |i: usize| b_name(i);
    t.push(entry(&[b(1), b(4)], &[(-sp, a0.clone()), (1, s("ax_0"))]));
    t.push(entry(&[b(2), b(5)], &[(-sp, a0.clone()), (1, s("ay_0"))]));
    t.push(entry(&[b(3), b(6)], &[(sp, a0.clone()), (1, s("aw_0"))]));
    t.push(entry(&[b(4), b(1)], &[(sp, a0.clone()), (1, s("az_0"))]));
    t.push(entry(&[b(5), b(2)], &[(sp, a0.clone()), (1, s("az_0"))]));
    t.push(entry(&[b(6), b(3)], &[(-sp, a0.clone()), (-1, s("az_0"))]));
    for l in LETTERS {
        let extra = if l == 'x' || l == 'y' { 0 } else { 1 };
        for i in 1..=params.top(l) {
            t.push(entry(
                &[letter_name(l, i - 1), letter_name(l, i)],
                &[(sign(p + i + extra), a0.clone()), (-1, chord_name(l, i))],
            ));
        }
    }
    let top = |l: char| letter_name(l, params.top(l));
    let (w, z, y, x) = (top('w'), top('z'), top('y'), top('x'));
    for pair in [
        [w.clone(), z.clone()],
        [w.clone(), y.clone()],
        [w.clone(), x.clone()],
        [z.clone(), y.clone()],
        [z.clone(), x.clone()],
        [y.clone(), x.clone()],
    ] {
        t.push(entry(&pair, &[(-1, a0.clone())]));
    }
    t.push(entry(
        &[s("z_0"), b(6), b(3)],
        &[(1, a0.clone()), (1, s("az_0"))],
    ));
    for triple in [
        [w.clone(), z.clone(), y.clone()],
        [w.clone(), z.clone(), x.clone()],
        [w.clone(), y.clone(), x.clone()],
        [z.clone(), y.clone(), x.clone()],
    ] {
        t.push(entry(&triple, &[(1, a0.clone())]));
    }
    t.push(entry(
        &[b(4), b(1), b(5), b(2)],
        &[(1, a0.clone()), (1, s("az_0"))],
    ));
    t.push(entry(&[w, z, y, x], &[(-1, a0)]));
    t
}

/// Reference `μ²_A` on non-unit pairs.
pub fn minimal_mu2_table(params: &KnotParams) -> Vec<TableEntry> {
    let sp = sign(params.p);
    let a0 = s("a0");
    let mut t = Vec::new();
    for (i, j) in [(1, 4), (2, 5), (6, 3)] {
        t.push(entry(&[b_name(i), b_name(j)], &[(-sp, a0.clone())]));
    }
    for (i, j) in [(4, 1), (5, 2), (3, 6)] {
        t.push(entry(&[b_name(i), b_name(j)], &[(sp, a0.clone())]));
    }
    t
}

/// Reference nonzero `μ⁴_A` values among the ten tuples.
pub fn minimal_mu4_table(params: &KnotParams) -> Vec<TableEntry> {
    let a0 = s("a0");
    let rows: &[([usize; 4], i64)] = if params.p_is_even() {
        &[([4, 1, 2, 5], 1), ([5, 2, 4, 1], -1), ([5, 2, 5, 2], -1)]
    } else {
        &[([4, 1, 2, 5], 1), ([4, 1, 5, 2], 1), ([2, 5, 2, 5], -1)]
    };
    rows.iter()
        .map(|(args, c)| {
            let names: Vec<String> = args.iter().map(|&i| b_name(i)).collect();
            entry(&names, &[(*c, a0.clone())])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub args: Vec<String>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TableComparison {
    pub entries_compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl TableComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn table_vector(a: &AInfinityAlgebra, value: &[(i64, String)]) -> Vector {
    let f = a.field();
    Vector::from_terms(
        value
            .iter()
            .map(|(c, n)| (a.expect_index(n), f.from_i64(*c))),
    )
}

/// Compares every non-unit entry of `a` in the given arities against `table`,
/// treating absent rows as zero.
pub fn compare_table(
    a: &AInfinityAlgebra,
    table: &[TableEntry],
    arities: &[usize],
) -> TableComparison {
    let mut expected: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
    for e in table {
        let args: Vec<usize> = e.args.iter().map(|n| a.expect_index(n)).collect();
        expected.insert(args, table_vector(a, &e.value));
    }
    let mut keys: Vec<Vec<usize>> = expected.keys().cloned().collect();
    for &d in arities {
        for (k, _) in a.entries(d) {
            if !k.contains(&a.unit()) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    keys.dedup();
    let mut out = TableComparison::default();
    for k in keys {
        let exp = expected.get(&k).cloned().unwrap_or_default();
        let act = a.product(&k).cloned().unwrap_or_default();
        out.entries_compared += 1;
        if exp != act {
            out.mismatches.push(Mismatch {
                args: k.iter().map(|&i| a.name(i).to_string()).collect(),
                expected: a.vector_string(&exp),
                actual: a.vector_string(&act),
            });
        }
    }
    out
}
