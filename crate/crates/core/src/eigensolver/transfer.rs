//! Transfer matrices for constant-potential pieces and δ′ interfaces.
//!
//! On a piece of length ℓ with q ≡ c the state (f, f′) propagates by
//! [[C, ℓS], [−(λ−c)ℓS, C]] with z = (λ−c)ℓ², C(z) = cos√z, S(z) = sin√z/√z
//! (hyperbolic branch for z < 0, power series near z = 0 to avoid
//! cancellation). The determinant is exactly 1 up to round-off.

/// Series/trig/hyperbolic switchover for |z|.
const SERIES_Z: f64 = 1e-6;

/// cos-like C(z) and sinc-like S(z) of z = ω²ℓ².
fn c_s(z: f64) -> (f64, f64) {
    if z.abs() < SERIES_Z {
        let c = 1.0 - z / 2.0 * (1.0 - z / 12.0 * (1.0 - z / 30.0));
        let s = 1.0 - z / 6.0 * (1.0 - z / 20.0 * (1.0 - z / 42.0));
        (c, s)
    } else if z > 0.0 {
        let w = z.sqrt();
        (w.cos(), w.sin() / w)
    } else {
        let w = (-z).sqrt();
        (w.cosh(), w.sinh() / w)
    }
}

/// 2×2 transfer matrix across a constant piece (row-major [[a,b],[c,d]]).
pub fn piece_matrix(len: f64, c_pot: f64, lambda: f64) -> [f64; 4] {
    let omega2 = lambda - c_pot;
    let z = omega2 * len * len;
    let (c, s) = c_s(z);
    [c, len * s, -omega2 * len * s, c]
}

/// Interface matrix for finite β: f ← f + β f′, f′ unchanged.
pub fn interface_matrix(beta: f64) -> [f64; 4] {
    [1.0, beta, 0.0, 1.0]
}

/// Propagates (f, f′) across a constant piece in place.
pub fn propagate_piece(state: &mut [f64; 2], len: f64, c_pot: f64, lambda: f64) {
    let m = piece_matrix(len, c_pot, lambda);
    let f = m[0] * state[0] + m[1] * state[1];
    let fp = m[2] * state[0] + m[3] * state[1];
    state[0] = f;
    state[1] = fp;
}

/// Applies the δ′ interface condition in place.
pub fn propagate_interface(state: &mut [f64; 2], beta: f64) {
    state[0] += beta * state[1];
}
