//! Build the smoothing kernels for a few smoothness orders and print their
//! coefficients, moments and constants.

use zeroth_additive::build_kernel;

fn main() -> zeroth_additive::Result<()> {
    for beta in [2.0, 3.0, 4.0, 5.5] {
        let k = build_kernel(beta)?;
        let ell = k.order().ell();
        println!("beta = {beta} (ell = {ell})");
        println!("  K(u) coefficients, low degree first: {:?}", k.coeffs());
        let moments: Vec<String> = (0..=ell).map(|j| format!("{:+.2e}", k.moment(j))).collect();
        println!("  moments 0..={ell}: [{}]", moments.join(", "));
        println!("  kappa = {:.6}, kappa_beta = {:.6}", k.kappa(), k.kappa_beta());
    }
    Ok(())
}
