//! Directed rounding without touching the FPU rounding mode.
//!
//! Sums and products are computed in round-to-nearest, then the exact
//! rounding error is recovered with an error-free transformation. The
//! endpoint is moved one ulp only when the rounded result lies on the wrong
//! side of the exact value, so exact operations stay exact. Where an
//! error-free transformation is unreliable (overflow or underflow range,
//! division, square root) the endpoint is moved unconditionally.

/// Products below this magnitude may have a non-representable error term.
const EFT_UNDERFLOW: f64 = 1e-290;
/// Dekker splitting overflows above roughly 2^996.
const EFT_OVERFLOW: f64 = 1e290;
const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::INFINITY {
        f64::MAX
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        f64::MIN
    } else {
        x.next_up()
    }
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if a.is_finite() && b.is_finite() { down(s) } else { s };
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if a.is_finite() && b.is_finite() { up(s) } else { s };
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
fn eft_safe(p: f64) -> bool {
    let m = p.abs();
    m < EFT_OVERFLOW && (m == 0.0 || m > EFT_UNDERFLOW)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return if a.is_finite() && b.is_finite() { down(p) } else { p };
    }
    if !eft_safe(p) || a.abs() >= EFT_OVERFLOW || b.abs() >= EFT_OVERFLOW {
        return p.next_down();
    }
    let (_, e) = two_prod(a, b);
    if e < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if !p.is_finite() {
        return if a.is_finite() && b.is_finite() { up(p) } else { p };
    }
    if !eft_safe(p) || a.abs() >= EFT_OVERFLOW || b.abs() >= EFT_OVERFLOW {
        return p.next_up();
    }
    let (_, e) = two_prod(a, b);
    if e > 0.0 {
        p.next_up()
    } else {
        p
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() && a.is_finite() && b != 0.0 {
        return down(q);
    }
    // Exact quotients are detected through the residual a - q*b.
    if q.is_finite() && eft_safe(q) && q.abs() < EFT_OVERFLOW && b.abs() < EFT_OVERFLOW {
        let (p, e) = two_prod(q, b);
        if p == a && e == 0.0 {
            return q;
        }
    }
    q.next_down()
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() && a.is_finite() && b != 0.0 {
        return up(q);
    }
    if q.is_finite() && eft_safe(q) && q.abs() < EFT_OVERFLOW && b.abs() < EFT_OVERFLOW {
        let (p, e) = two_prod(q, b);
        if p == a && e == 0.0 {
            return q;
        }
    }
    q.next_up()
}

#[inline]
fn sqrt_is_exact(a: f64, r: f64) -> bool {
    if a == 0.0 {
        return true;
    }
    if !eft_safe(a) {
        return false;
    }
    let (p, e) = two_prod(r, r);
    p == a && e == 0.0
}

#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    let r = a.sqrt();
    if sqrt_is_exact(a, r) {
        r
    } else {
        r.next_down().max(0.0)
    }
}

#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let r = a.sqrt();
    if sqrt_is_exact(a, r) {
        r
    } else {
        r.next_up()
    }
}
