use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    for lmax in [266usize, 400, 532] {
        let mut cfg: Scenario = preset("fig5").unwrap();
        cfg.l_max = Some(lmax);
        cfg.window = resfluor::config::Window::Custom(4995.0, 5005.0);
        let r = run_scenario(&cfg).unwrap();
        let k = r.series.omega.iter().position(|&w| (w - 5000.0).abs() < 0.026).unwrap();
        let dbl = r.peaks.nearest(5003.0).unwrap().height;
        println!("lmax {lmax}: S(5000) = {:.6e}, doublet h = {:.6e}, ratio = {:.4}", r.series.s[k], dbl, r.series.s[k] / dbl);
    }
    // delta2 dependence of the central ratio
    for d2 in [6.0, 6.5, 7.0, 8.0] {
        let mut cfg: Scenario = preset("fig4").unwrap();
        cfg.name = Some(format!("fig4@{d2}"));
        cfg.drives[1].rabi = d2;
        cfg.drives[1].delta_a = d2;
        cfg.window = resfluor::config::Window::Custom(4995.0, 5005.0);
        let r = run_scenario(&cfg).unwrap();
        let k = r.series.omega.iter().position(|&w| (w - 5000.0).abs() < 0.026).unwrap();
        let dbl = r.peaks.nearest(5000.0 + d2 / 2.0).unwrap().height;
        println!("d2 {d2}: S(5000) = {:.4e}, doublet({:.1}) = {:.4e}, ratio = {:.4}", r.series.s[k], 5000.0 + d2/2.0, dbl, r.series.s[k] / dbl);
    }
}
