//! The walkthrough from the README, runnable end to end.

use conedual::group::{GroupSpec, Window};
use conedual::{cones, decomp, extremal, spectral};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupSpec::cyclic(8)?;
    let u = Window::new(g.clone(), vec![0, 1, 7])?; // symmetric, contains 0
    let v = Window::new(g.clone(), vec![3, 5])?;

    // both sides of the window duality, solved independently
    let report = extremal::duality_check(&u, &v, 1e-9)?;
    assert!(report.gap <= 1e-7);
    assert!(cones::is_pd_fourier(&report.sigma_g, 1e-9));
    println!("S(U,V) = {}   gap = {:e}", report.s.value, report.gap);

    // decompose a function against the dual cone
    let f = spectral::GFunc::from_real(g, &[3.0, 1.0, 0.0, 2.0, 1.0, 2.0, 0.0, 1.0])?;
    match decomp::decompose(&f, 1e-9)? {
        decomp::DecompOutcome::Member(d) => {
            println!("member, residual {:e}", d.residual);
            assert!(d.residual <= 1e-9);
        }
        decomp::DecompOutcome::NonMember(w) => {
            println!("non-member, pairing {}", w.pairing);
            assert!(w.pairing < 0.0);
        }
    }
    Ok(())
}
