use std::collections::BTreeSet;

use anfsat::tmatrix::{Cell, TernaryMatrix};
use anfsat::Clause;
use proptest::prelude::*;

const N: usize = 5;

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![Just(Cell::Zero), Just(Cell::One), Just(Cell::Neutral)]
}

fn matrix() -> impl Strategy<Value = TernaryMatrix> {
    prop::collection::btree_set(1..=N as u32, 1..=N)
        .prop_flat_map(|cols| {
            let cols: Vec<u32> = cols.into_iter().collect();
            let w = cols.len();
            (Just(cols), prop::collection::vec(prop::collection::vec(cell(), w), 0..6))
        })
        .prop_map(|(cols, rows)| TernaryMatrix::new(cols, rows).unwrap())
}

/// Points of the matrix over `x_1..x_N`, by direct row matching.
fn points(a: &TernaryMatrix) -> BTreeSet<u64> {
    (0..1u64 << N)
        .filter(|&code| {
            a.rows().iter().any(|r| {
                a.columns().iter().zip(r).all(|(&v, c)| match c {
                    Cell::Neutral => true,
                    Cell::Zero => code >> (v - 1) & 1 == 0,
                    Cell::One => code >> (v - 1) & 1 == 1,
                })
            })
        })
        .collect()
}

fn rows_disjoint(a: &TernaryMatrix) -> bool {
    let rs = a.rows();
    (0..rs.len()).all(|i| {
        (i + 1..rs.len()).all(|j| rs[i].iter().zip(&rs[j]).any(|(x, y)| {
            matches!((x, y), (Cell::Zero, Cell::One) | (Cell::One, Cell::Zero))
        }))
    })
}

proptest! {
    #[test]
    fn reduce_preserves_points_and_is_idempotent(a in matrix()) {
        let r = a.reduce();
        prop_assert_eq!(points(&r), points(&a));
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert!(rows_disjoint(&r));
        prop_assert_eq!(r.enumerate_models(N).unwrap(), points(&a));
    }

    #[test]
    fn reduce_is_confluent(a in matrix(), seed in any::<u64>()) {
        // Same point set, different cover: rotated rows with repeats.
        let mut rows = a.rows().to_vec();
        if !rows.is_empty() {
            let k = seed as usize % rows.len();
            rows.rotate_left(k);
        }
        let mut duplicated = rows.clone();
        duplicated.extend(rows.iter().take(2).cloned());
        let b = TernaryMatrix::new(a.columns().to_vec(), duplicated).unwrap();
        prop_assert_eq!(b.reduce(), a.reduce());
        let full: Vec<u32> = (1..=N as u32).collect();
        let points_only = TernaryMatrix::new(
            full.clone(),
            points(&a)
                .into_iter()
                .map(|c| (0..N).map(|i| Cell::from_bit(c >> i & 1 == 1)).collect())
                .collect(),
        )
        .unwrap();
        prop_assert_eq!(points_only.reduce(), a.extend(&full).unwrap().reduce());
    }

    #[test]
    fn operations_are_set_operations(a in matrix(), b in matrix()) {
        let (pa, pb) = (points(&a), points(&b));
        prop_assert_eq!(points(&a.conjoin(&b)), &pa & &pb);
        prop_assert_eq!(points(&a.disjoin(&b)), &pa | &pb);
        prop_assert_eq!(a.count_models(N).unwrap(), (pa.len() as u64).into());
    }

    #[test]
    fn block_decomposition_covers_disjointly(a in matrix()) {
        let blocks = a.block_decompose();
        let mut seen = BTreeSet::new();
        for b in &blocks {
            prop_assert_eq!(b.rows().len(), 1);
            prop_assert!(b.rows()[0].iter().all(|c| *c != Cell::Neutral));
            let p = points(b);
            prop_assert!(seen.is_disjoint(&p));
            seen.extend(p);
        }
        prop_assert_eq!(seen, points(&a));
    }

    #[test]
    fn extension_adds_neutral_columns(a in matrix()) {
        let full: Vec<u32> = (1..=N as u32).collect();
        let e = a.extend(&full).unwrap();
        prop_assert_eq!(e.columns(), &full[..]);
        prop_assert_eq!(points(&e), points(&a));
    }
}

#[test]
fn clause_matrix_has_seven_rows_and_six_minimum_decompositions() {
    let c = Clause::from_dimacs([3, -1, 2]).unwrap();
    let a = TernaryMatrix::clause_matrix(&c);
    assert_eq!(a.columns(), [1, 2, 3]);
    assert_eq!(a.rows().len(), 7);
    assert!(!a.contains_code(0b001));
    let decs = a.minimum_block_decompositions().unwrap();
    assert_eq!(decs.len(), 6);
    assert!(decs.iter().all(|d| d.len() == 3));
}

#[test]
fn reduction_example() {
    let a = TernaryMatrix::from_strings(vec![1, 2, 3], &["000", "001", "010", "011", "100", "101", "110"])
        .unwrap();
    let rows: Vec<String> = a
        .reduce()
        .rows()
        .iter()
        .map(|r| r.iter().map(|c| c.as_char()).collect())
        .collect();
    assert_eq!(rows, ["0..", "10.", "110"]);
}

#[test]
fn display_pads_to_headers() {
    let a = TernaryMatrix::from_strings(vec![1, 12], &["0.", "11"]).unwrap();
    assert_eq!(a.to_string(), "x1 x12\n0  .\n1  1\n");
}
