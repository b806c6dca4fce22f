use resfluor::pipeline::run_scenario;
use resfluor::presets::preset;
use resfluor::Scenario;

fn main() {
    for name in ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig8", "fig9"] {
        let cfg: Scenario = preset(name).unwrap();
        let r = run_scenario(&cfg).unwrap();
        let mx = r.series.max_value();
        let mn = r.series.min_value();
        println!("{name}: max {mx:.3e} min {mn:.3e}  min/max {:.3e}  resid {:.1e}", mn / mx, r.series.meta.residual_max);
    }
}
