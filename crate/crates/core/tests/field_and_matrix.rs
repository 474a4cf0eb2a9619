use std::sync::OnceLock;

use proptest::prelude::*;
use tgrs::ff::ArithOp;
use tgrs::{Error, Felt, Field, Matrix};

fn fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| vec![
        Field::prime(2).unwrap(),
        Field::prime(7).unwrap(),
        Field::prime(17).unwrap(),
        Field::new(2, 3, None).unwrap(),
        Field::new(3, 2, None).unwrap(),
        Field::new(5, 2, None).unwrap(),
        Field::new(2, 8, None).unwrap(),
    ])
}

fn elem(f: &Field, raw: u32) -> Felt {
    f.element((raw % f.order()) as u64).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(fi in 0usize..7, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[fi];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), Felt::ONE);
            prop_assert_eq!(f.div(b, a).unwrap(), f.mul(b, inv));
            prop_assert_eq!(f.pow(a, -1).unwrap(), inv);
            prop_assert_eq!(f.pow_u(a, (f.order() - 1) as u64), Felt::ONE);
        }
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(seed in any::<u64>(), n in 1usize..6) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for f in fields() {
            let a = Matrix::from_fn(f, n, n, |_, _| elem(f, rng.gen()));
            let b = Matrix::from_fn(f, n, n, |_, _| elem(f, rng.gen()));
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
            prop_assert_eq!(a.transpose().det().unwrap(), a.det().unwrap());
            match a.inverse() {
                Ok(inv) => prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(f, n)),
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(a.det().unwrap().is_zero());
                }
            }
            // adj(A) A = det(A) I
            let adj = a.adjugate().unwrap();
            prop_assert_eq!(adj.mul(&a).unwrap(), Matrix::identity(f, n).scale(a.det().unwrap()));
        }
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..8) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for f in fields() {
            // low-rank products exercise the dependent case
            let inner = rng.gen_range(1..=rows.min(cols));
            let l = Matrix::from_fn(f, rows, inner, |_, _| elem(f, rng.gen()));
            let r = Matrix::from_fn(f, inner, cols, |_, _| elem(f, rng.gen()));
            let m = l.mul(&r).unwrap();
            let ns = m.null_space();
            prop_assert_eq!(m.rank() + ns.rows(), cols);
            if ns.rows() > 0 {
                prop_assert!(m.mul(&ns.transpose()).unwrap().is_zero());
                prop_assert_eq!(ns.rank(), ns.rows());
            }
            let rr = m.rref();
            prop_assert_eq!(rr.rank, m.rank());
            prop_assert_eq!(rr.pivots.len(), rr.rank);
        }
    }
}

#[test]
fn reference_values() {
    let f7 = Field::prime(7).unwrap();
    assert_eq!(f7.arith(ArithOp::Add, Felt::ONE, f7.from_int(6)).unwrap(), Felt::ZERO);
    assert_eq!(f7.arith(ArithOp::Inv, f7.from_int(3), Felt::ZERO).unwrap(), f7.from_int(5));
    assert_eq!(f7.arith(ArithOp::Div, Felt::ONE, Felt::ZERO), Err(Error::DivisionByZero));
    assert_eq!(f7.primitive_root(), f7.from_int(3));
    let f9 = Field::new(3, 2, None).unwrap();
    assert_eq!(f9.modulus(), &[2, 1, 1]);
    let z = f9.parse("z").unwrap();
    assert_eq!(f9.multiplicative_order(z).unwrap(), 8);
    assert_eq!(f9.pow_u(z, 4), f9.from_int(2));
    assert!(matches!(Field::prime(9), Err(Error::NonPrime(9))));
    assert!(Field::new(3, 2, Some(&[2, 0, 1])).is_err());
    assert!(Field::new(3, 2, Some(&[1, 0, 1, 1])).is_err());
    assert!(Field::new(3, 0, None).is_err());
}

#[test]
fn matrix_text_and_errors() {
    let f = Field::prime(5).unwrap();
    let m = Matrix::parse(&f, "1,2;3,4").unwrap();
    assert_eq!(m.to_string(), "1,2;3,4");
    assert_eq!(m.det().unwrap(), f.from_int(-2));
    assert!(Matrix::parse(&f, "1,2;3").is_err());
    let g = Field::prime(7).unwrap();
    let other = Matrix::identity(&g, 2);
    assert_eq!(m.mul(&other), Err(Error::FieldMismatch));
    let rect = Matrix::zeros(&f, 2, 3);
    assert!(matches!(rect.det(), Err(Error::NotSquare { .. })));
    assert!(rect.select_columns(&[2, 1]).is_err());
    assert!(rect.select_columns(&[3]).is_err());
}
