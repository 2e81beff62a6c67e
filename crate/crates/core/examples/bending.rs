//! Bending a corner: the quadratic interpolation of the second fundamental
//! form and its 1/ε blow-up in scalar curvature.

use torical::smoothing::{fit_inverse_epsilon, BendingFamily};

fn main() -> torical::Result<()> {
    let h = vec![1.0, 1.0, 1.0];
    let a_new = vec![0.0, 0.0, 0.0];
    let a_old = vec![1.0, 1.0, 1.0];

    let fam = BendingFamily::new(h.clone(), a_new.clone(), a_old.clone(), 0.01)?;
    println!("trace jump {:.6}", fam.trace_jump());
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let t = s * fam.epsilon();
        let w = fam.weyl_ricci(t)?;
        println!("t = {t:.4}  Sc = {:>12.4}  Ric {:>12.4}  (weyl - warped {:.1e})", fam.scalar_curvature(t)?, w.weyl, w.residual);
    }
    println!("leading-term defect {:.3e}", fam.leading_term_defect(101)?);

    let eps: Vec<f64> = (0..6).map(|i| 1e-2 / 2f64.powi(i)).collect();
    let fit = fit_inverse_epsilon(&h, &a_new, &a_old, &eps, 0.5)?;
    println!("\nSc(eps/2) ~ c/eps + d: c = {:.8}  d = {:.4}", fit.coefficient, fit.intercept);
    Ok(())
}
