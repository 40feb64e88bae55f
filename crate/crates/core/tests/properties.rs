use num_traits::Zero;
use proptest::prelude::*;

use qsd_core::criteria::{b_from_cc, calderbank, cc_slack, full_report};
use qsd_core::design::{complement, derive_params, QsdParams};
use qsd_core::rational::{frac, Q};
use qsd_core::scanner::cc_lambda;

fn integral_design() -> impl Strategy<Value = QsdParams> {
    (5u64..120, 2u64..60, 1u64..200, 1u64..40, 0u64..40)
        .prop_filter_map("valid and integral", |(v, k, l, x, y)| {
            let p = QsdParams::new(v, k, l, x, y).ok()?;
            derive_params(&p).integral.then_some(p)
        })
}

/// Parameters with `λ` forced by equality in the Calderbank–Cowen bound.
fn cc_design() -> impl Strategy<Value = QsdParams> {
    let mut all = Vec::new();
    for v in 5u64..100 {
        for k in 2..v {
            for x in 1..k {
                for y in 0..x {
                    let Some(l) = cc_lambda(v, k, x, y) else { continue };
                    let p = QsdParams::new(v, k, l, x, y).unwrap();
                    if derive_params(&p).integral {
                        all.push(p);
                    }
                }
            }
        }
    }
    prop::sample::select(all)
}

fn rational_tuple() -> impl Strategy<Value = (Q, Q, Q, Q)> {
    (3i64..200, 1i64..5, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(v, d, fk, fx, fy)| {
        let vq = frac(v, d);
        let scale = |f: f64, hi: &Q| {
            let n = (f * 1000.0) as i64 + 1;
            hi * frac(n, 1002)
        };
        let k = scale(fk, &vq);
        let x = scale(fx, &k);
        let y = scale(fy, &x);
        (vq, k, x, y)
    })
}

proptest! {
    #[test]
    fn complement_is_an_involution(p in integral_design()) {
        let d = derive_params(&p);
        if let Ok((pc, dc)) = complement(&p, &d) {
            prop_assert_eq!(&dc.b, &d.b);
            let (pp, _) = complement(&pc, &dc).unwrap();
            prop_assert_eq!(pp, p);
        }
    }

    #[test]
    fn calderbank_is_complement_invariant(p in integral_design()) {
        let d = derive_params(&p);
        if let Ok((pc, _)) = complement(&p, &d) {
            prop_assert_eq!(calderbank(&p), calderbank(&pc));
        }
    }

    #[test]
    fn hobart_is_complement_invariant_on_the_cc_surface(p in cc_design()) {
        let d = derive_params(&p);
        if let Ok((pc, _)) = complement(&p, &d) {
            let (a, b) = (full_report(&p).unwrap(), full_report(&pc).unwrap());
            prop_assert!(a.cc_slack.is_zero() && b.cc_slack.is_zero());
            prop_assert_eq!(a.h_value, b.h_value);
            prop_assert_eq!(a.c_value, b.c_value);
        }
    }

    #[test]
    fn b_from_cc_lies_on_the_bound((v, k, x, y) in rational_tuple()) {
        if let Ok(b) = b_from_cc(&v, &k, &x, &y) {
            prop_assert!(cc_slack(&v, &k, &x, &y, &b).unwrap().is_zero());
        }
    }
}
