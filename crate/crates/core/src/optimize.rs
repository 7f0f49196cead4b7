//! One-dimensional golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` on `[lo, hi]`, assuming it is unimodal there. Returns the
/// best abscissa seen (including the endpoints) and its value.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut best = (a, f(a));
    let fb = f(b);
    if fb > best.1 {
        best = (b, fb);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Minimizes `f` on `[lo, hi]`; see [`golden_section_max`].
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_section_max(|x| -f(x), lo, hi, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_vertex() {
        let (x, v) = golden_section_max(|x| 2.0 - (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        // the vertex is flat to rounding within ~1e-8 of 0.3
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn finds_kink_minimum() {
        let (x, v) = golden_section_min(|x| (x - 1.7).abs(), 0.0, 5.0, 1e-10);
        assert!((x - 1.7).abs() < 1e-9);
        assert!(v < 1e-9);
    }

    #[test]
    fn endpoint_maximum_is_kept() {
        let (x, _) = golden_section_max(|x| x, 0.0, 1.0, 1e-8);
        assert_eq!(x, 1.0);
    }
}
