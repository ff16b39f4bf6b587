use std::sync::Arc;

use num_bigint::BigInt;

use cyheight::arith::{gcd, primes_in};
use cyheight::character_sums::{jacobi_sum, jacobi_sum_dense, jacobi_sum_naive};
use cyheight::fermat::{enumerate_alpha, height_fermat, stickelberger_ah, HeightValue};
use cyheight::padic::{valuation_adaptive, PadicContext, Valuation};
use cyheight::zeta::{brute_force_point_count, point_count_from_zeta, zeta_fermat};
use cyheight::{build_field, Character, CycInt, FermatParams, JacobiCache, JacobiTable};

fn character(p: u64, m: u32, r: u32) -> (FermatParams, Character) {
    let params = FermatParams::new(p, m, r).unwrap();
    let field = Arc::new(build_field(p, params.f).unwrap());
    (params, Character::new(field, m).unwrap())
}

#[test]
fn all_jacobi_routes_agree_on_a_5_3_over_f16() {
    let (_, chi) = character(2, 5, 3);
    for alpha in enumerate_alpha(5, 3).unwrap() {
        let fast: CycInt = jacobi_sum(&alpha, &chi).unwrap();
        let dense: CycInt = jacobi_sum_dense(&alpha, &chi).unwrap();
        let naive: CycInt = jacobi_sum_naive(&alpha, &chi).unwrap();
        assert_eq!(fast, dense, "{alpha}");
        assert_eq!(fast, naive, "{alpha}");
    }
}

#[test]
fn cubic_jacobi_sums_over_f13() {
    let (params, chi) = character(13, 3, 1);
    for alpha in enumerate_alpha(3, 1).unwrap() {
        let fast: CycInt = jacobi_sum(&alpha, &chi).unwrap();
        let naive: CycInt = jacobi_sum_naive(&alpha, &chi).unwrap();
        assert_eq!(fast, naive);
        assert_eq!(
            fast.modulus_squared(),
            CycInt::from_int(3, BigInt::from(params.q))
        );
    }
}

#[test]
fn machine_and_bigint_coefficients_agree() {
    let (_, chi) = character(3, 4, 2);
    for alpha in enumerate_alpha(4, 2).unwrap() {
        let small: cyheight::CycSmall = jacobi_sum(&alpha, &chi).unwrap();
        let big: CycInt = jacobi_sum(&alpha, &chi).unwrap();
        assert_eq!(small.convert::<BigInt>(), big);
    }
}

#[test]
fn stickelberger_on_curves_and_surfaces() {
    for (p, m, r) in [(13, 3, 1), (5, 3, 1), (2, 3, 2), (7, 4, 2), (11, 5, 1)] {
        let (params, chi) = character(p, m, r);
        let table = JacobiTable::compute(params, &chi).unwrap();
        let k0 = PadicContext::default_precision(params.f, r);
        for (alpha, j) in table.iter() {
            let v = valuation_adaptive(j, chi.field(), k0, Some(1)).unwrap();
            assert_eq!(
                v,
                Valuation::Exact(stickelberger_ah(alpha, p).unwrap()),
                "({p},{m},{r}) {alpha}"
            );
        }
    }
}

#[test]
fn zeta_matches_enumeration_on_small_instances() {
    for (p, m, r, s) in [
        (5, 3, 1, 2),
        (2, 3, 1, 3),
        (11, 3, 1, 1),
        (13, 4, 1, 1),
        (5, 4, 2, 1),
        (3, 6, 1, 1),
    ] {
        let Ok(params) = FermatParams::new(p, m, r) else {
            continue;
        };
        let zeta = zeta_fermat(&params).unwrap();
        assert_eq!(
            point_count_from_zeta(&zeta, s).unwrap(),
            BigInt::from(brute_force_point_count(&params, s).unwrap()),
            "({p},{m},{r}) s={s}"
        );
    }
}

#[test]
fn finite_heights_are_one_beyond_calabi_yau_degrees() {
    for m in [4u32, 5, 6, 7, 8] {
        for p in primes_in(2, 60) {
            if gcd(p, m as u64) != 1 {
                continue;
            }
            let params = FermatParams::new(p, m, m - 2).unwrap();
            let h = height_fermat(&params).unwrap().height;
            assert!(
                matches!(h, HeightValue::Finite(1) | HeightValue::Infinite),
                "p={p} m={m}: {h}"
            );
        }
    }
}

#[test]
fn jacobi_cache_round_trip_and_warm_reads() {
    let dir = tempfile::tempdir().unwrap();
    let cache = JacobiCache::new(dir.path());
    let (params, chi) = character(3, 4, 2);
    let cold = cache.load_or_compute(params, &chi).unwrap();
    let bytes = std::fs::read(cache.path_for(&params)).unwrap();
    let warm = cache.load_or_compute(params, &chi).unwrap();
    assert_eq!(cold.sums, warm.sums);
    assert_eq!(std::fs::read(cache.path_for(&params)).unwrap(), bytes);

    std::fs::write(cache.path_for(&params), b"{ not json").unwrap();
    assert!(cache.load(&params).is_none());
    let rebuilt = cache.load_or_compute(params, &chi).unwrap();
    assert_eq!(rebuilt.sums, cold.sums);
}
