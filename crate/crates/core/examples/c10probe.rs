use resfluor::analysis::integrated_intensity;
use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::regression::total_incoherent_intensity;
use resfluor::Scenario;

fn main() {
    // sum rule on fig1 over a wide window
    let mut cfg: Scenario = preset("fig1").unwrap();
    cfg.window = resfluor::config::Window::Custom(4850.0, 5150.0);
    let r = run_scenario(&cfg).unwrap();
    let integral = integrated_intensity(&r.series);
    let expect = total_incoherent_intensity(1.0, &r.state);
    println!("sum rule fig1: integral {integral:.6e} vs gamma*Y1(0) {expect:.6e}  rel {:.3e}", (integral/expect - 1.0).abs());

    // fig5 doubling at 532 -> 1064 on a narrow window
    let mut a: Scenario = preset("fig5").unwrap();
    a.window = resfluor::config::Window::Custom(4994.0, 5006.0);
    a.l_max = Some(532);
    let ra = run_scenario(&a).unwrap();
    let mut b = a.clone();
    b.l_max = Some(1064);
    let rb = run_scenario(&b).unwrap();
    let mx = ra.series.max_value();
    let d: f64 = ra.series.s.iter().zip(&rb.series.s).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("fig5 532 vs 1064: max diff {:.3e} rel {:.3e}", d, d / mx);
}
