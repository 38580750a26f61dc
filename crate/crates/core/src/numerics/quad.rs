//! Adaptive Simpson quadrature.

use crate::scalar::Scalar;

struct Panel<F> {
    a: F,
    b: F,
    fa: F,
    fm: F,
    fb: F,
    whole: F,
    tol: F,
    depth: u32,
}

fn simpson<F: Scalar>(a: F, b: F, fa: F, fm: F, fb: F) -> F {
    (b - a) / F::of(6.0) * (fa + F::of(4.0) * fm + fb)
}

/// Adaptive Simpson integral of `f` over `[a, b]` with absolute tolerance
/// `tol`. Deterministic; panels are refined depth-first with Richardson
/// correction on accepted panels.
pub fn integrate<F: Scalar>(f: &dyn Fn(F) -> F, a: F, b: F, tol: F) -> F {
    if a == b {
        return F::zero();
    }
    let two = F::of(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol,
        depth: 0,
    }];
    let mut total = F::zero();
    let fifteen = F::of(15.0);
    while let Some(p) = stack.pop() {
        let m = (p.a + p.b) / two;
        let lm = (p.a + m) / two;
        let rm = (m + p.b) / two;
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        if p.depth >= 60 || delta.abs() <= fifteen * p.tol {
            total += left + right + delta / fifteen;
        } else {
            let half_tol = p.tol / two;
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
                tol: half_tol,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
                tol: half_tol,
                depth: p.depth + 1,
            });
        }
    }
    total
}
