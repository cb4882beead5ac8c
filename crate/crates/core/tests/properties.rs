use proptest::prelude::*;

use hardedge::kernels::{bessel_kernel_entire, laguerre_kernel_entire};
use hardedge::{finite_distribution, limit_distribution, DistributionTable, KernelSpec, RealOrder, Scaling};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn limit_law_is_a_survival_function(a in -0.9f64..4.0, s in 0.05f64..12.0, ds in 0.05f64..3.0) {
        let f1 = limit_distribution(a, s, 30).unwrap().value;
        let f2 = limit_distribution(a, s + ds, 30).unwrap().value;
        prop_assert!(0.0 < f2 && f2 < f1 && f1 <= 1.0);
    }

    #[test]
    fn finite_law_lies_in_unit_interval(a in -0.9f64..3.0, n in 1usize..60, s in 0.05f64..10.0) {
        for scaling in [Scaling::Standard, Scaling::Optimal] {
            if scaling.factor(a, n) <= 0.0 {
                continue;
            }
            let v = finite_distribution(a, n, s, scaling, 30).unwrap().value;
            prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn kernels_are_symmetric(a in -0.9f64..3.0, x in 0.0f64..20.0, y in 0.0f64..20.0, n in 1usize..80) {
        let b = (bessel_kernel_entire(a, x, y).unwrap(), bessel_kernel_entire(a, y, x).unwrap());
        prop_assert!((b.0 - b.1).abs() <= 1e-13 * b.0.abs().max(1.0));
        let spec = KernelSpec::finite(RealOrder::new(a).unwrap(), n, Scaling::Standard).unwrap();
        let l = (laguerre_kernel_entire(&spec, x, y).unwrap(), laguerre_kernel_entire(&spec, y, x).unwrap());
        prop_assert!((l.0 - l.1).abs() <= 1e-12 * l.0.abs().max(1.0));
    }
}

#[test]
fn tables_do_not_depend_on_thread_count() {
    let grid: Vec<f64> = (1..=16).map(|i| 0.5 * i as f64).collect();
    let many = DistributionTable::limit(0.7, &grid, 30).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| DistributionTable::limit(0.7, &grid, 30).unwrap());
    assert_eq!(many, one);
    let fin = DistributionTable::finite(1.0, 30, Scaling::Custom(-0.5), &grid, 30).unwrap();
    assert_eq!(
        fin,
        pool.install(|| DistributionTable::finite(1.0, 30, Scaling::Custom(-0.5), &grid, 30).unwrap())
    );
}
