/// Gauss-Laguerre quadrature rule: `int_0^inf e^{-x} f(x) dx ~= sum w_i f(x_i)`.
///
/// Weights include the `e^{-x}` factor, so they stay representable for
/// large node counts. Nodes are found by Newton iteration on the scaled
/// Laguerre function `L_n(x) e^{-x/2}`, which keeps the recurrence in range.
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            // Stroud-Secrest initial guesses.
            let mut z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => nodes[0] + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = i as f64 - 1.0;
                    nodes[i - 1]
                        + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (nodes[i - 1] - nodes[i - 2])
                }
            };
            for _ in 0..100 {
                let (l1, _, deriv) = scaled_laguerre(n, z);
                let dz = l1 / deriv;
                z -= dz;
                if dz.abs() < 1e-15 * (1.0 + z) {
                    break;
                }
            }
            let (_, _, deriv) = scaled_laguerre(n, z);
            // w_i = x_i / [(n+1) L_{n+1}(x_i)]^2, with the e^{-x} weight
            // absorbed through the e^{-z/2}-scaled recurrence values.
            // At a root, L_{n+1}(z) = -z L_n'(z) / (n+1).
            let lnp1_scaled = -z / (nf + 1.0) * deriv;
            let w = z * (-z).exp() / ((nf + 1.0) * (nf + 1.0) * lnp1_scaled * lnp1_scaled);
            nodes.push(z);
            weights.push(w);
        }
        GaussLaguerre { nodes, weights }
    }
}

/// Returns `(L_n(z) e^{-z/2}, L_{n-1}(z) e^{-z/2}, d/dz L_n(z) e^{-z/2})`.
fn scaled_laguerre(n: usize, z: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let mut l1 = (-0.5 * z).exp();
    let mut l2 = 0.0;
    for k in 1..=n {
        let l3 = l2;
        l2 = l1;
        l1 = ((2.0 * k as f64 - 1.0 - z) * l2 - (k as f64 - 1.0) * l3) / k as f64;
    }
    let deriv = (nf * l1 - nf * l2) / z;
    (l1, l2, deriv)
}
