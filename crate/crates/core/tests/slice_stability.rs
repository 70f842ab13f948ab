use sedlab::slice_model::{density_spread, stability_study};

const NS: [usize; 3] = [40, 80, 120];
const EPSS: [f64; 2] = [1e-3, 1e-4];

#[test]
fn slice_model_is_stable_across_grids_and_levels() {
    let rows = stability_study(&NS, &EPSS, 0.5, 1.0).unwrap();
    for r in &rows {
        println!(
            "N={:>3} eps={:e} vertices={:>6} density={:.3} cross={} (arm {:.3} x {:.3})",
            r.n, r.eps, r.vertices, r.vertex_density, r.cross.is_cross(), r.cross.arm_length, r.cross.arm_width
        );
    }
    for r in &rows {
        assert!(r.vertices > 0, "empty mesh at N={} eps={}", r.n, r.eps);
        assert!(r.cross.connected && r.cross.is_cross(), "N={} eps={}: {:?}", r.n, r.eps, r.cross);
    }
    let spreads: Vec<(f64, f64)> = EPSS.iter().map(|&e| (e, density_spread(&rows, e))).collect();
    println!("vertex-density spread per eps: {spreads:?}");
    for (eps, s) in spreads {
        assert!(s < 0.5, "vertex density varies by {:.1}% at eps={eps:e}", 100.0 * s);
    }
}
