use crate::config::{ExperimentConfig, Scenario};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub scenario: Scenario,
    pub kind: &'static str,
    pub description: &'static str,
    pub defaults: &'static str,
    pub config: ExperimentConfig,
}

fn defaults(s: Scenario) -> &'static str {
    match s {
        Scenario::GoeBaseline => "N=100 replicas=1000 k=2 level=0.01",
        Scenario::Gw => "N=300 c=0.5 C=2",
        Scenario::Band => "d=1 N=300 W=⌈N^0.8⌉",
        Scenario::Sparse => "N=300 θ=4",
        Scenario::Block => "D=4 M=75 λ=0.5",
        Scenario::Heavy => "N=300 Student-t dof=9",
        Scenario::Lift2 => "50 graphs, N≤64, d∈{2,4,8}",
        Scenario::Wishart => "N=300 α=0.5 width=0.3",
        Scenario::CounterexampleBlockdiag => "D=2 M=150 λ=0",
        Scenario::DiagramsExact => "N∈{2,3,4} m≤8 β∈{1,2}",
        Scenario::NbpathExact => "100 seeds, N≤8 n≤10; Wishart M,N≤6 n≤5",
        Scenario::MixingAudit => "GW N=256, L=64 W=8, ring 8192",
    }
}

/// Every scenario with its default configuration.
pub fn list_presets() -> Vec<Preset> {
    Scenario::ALL
        .into_iter()
        .map(|s| Preset {
            scenario: s,
            kind: if s.is_statistical() { "statistical" } else { "exact" },
            description: s.description(),
            defaults: defaults(s),
            config: ExperimentConfig::new(s),
        })
        .collect()
}

/// Plain-text table of [`list_presets`].
pub fn presets_table() -> String {
    let presets = list_presets();
    let w = presets.iter().map(|p| p.scenario.tag().len()).max().unwrap_or(0);
    let mut s = format!("{:<w$}  {:<11}  {:<42}  {}\n", "scenario", "kind", "defaults", "description");
    for p in presets {
        s.push_str(&format!("{:<w$}  {:<11}  {:<42}  {}\n", p.scenario.tag(), p.kind, p.defaults, p.description));
    }
    s
}
