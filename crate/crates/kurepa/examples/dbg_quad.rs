use num_complex::Complex64;

fn main() {
    // replicate the panel construction and print per-panel errors
    let z = Complex64::new(1.0, 0.0);
    let f = |t: f64| kurepa::kurepa_integrand(z, t).unwrap();
    let mut breaks = vec![0.0f64];
    let mut p = 2.0f64.powi(-44);
    while p < 0.75 {
        breaks.push(p);
        p *= 2.0;
    }
    breaks.push(1.0);
    breaks.push(35.0);
    let mut total_err = 0.0;
    let mut total_val = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        // crude GK check: midpoint value times width as sanity + print
        let mid = 0.5 * (w[0] + w[1]);
        let val = f(mid) * (w[1] - w[0]);
        total_val += val;
        if w[1] - w[0] > 0.2 || w[0] == 0.0 {
            println!("panel [{:.3e}, {:.3e}] midval {:.6e}", w[0], w[1], val.re);
        }
        total_err += 0.0;
    }
    println!("crude total {total_val}, err {total_err}");
}
