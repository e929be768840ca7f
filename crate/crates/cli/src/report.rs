//! Line-oriented `key = value` run reports with a fixed key order.

use exminor::embed::{EmbedConfig, EmbedStats, SizeGuard, StageFailure};
use exminor::{Cut, Graph, Rational};

pub struct RunReport {
    lines: Vec<(String, String)>,
}

fn frac(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl RunReport {
    pub fn new(cfg: &EmbedConfig, g: &Graph, h: &Graph) -> Self {
        let mut r = RunReport { lines: Vec::new() };
        r.set("outcome", "failed");
        r.set("seed", cfg.seed);
        r.set("alpha", frac(cfg.alpha));
        r.set(
            "mode",
            match cfg.size_guard {
                SizeGuard::Permissive => "permissive",
                SizeGuard::Strict => "strict",
            },
        );
        r.set("retries", cfg.max_retries);
        r.set("n", g.n());
        r.set("d", g.max_degree());
        r.set("target_vertices", h.n());
        r.set("target_edges", h.m());
        r
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.lines.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.lines.push((key.to_string(), value)),
        }
    }

    pub fn outcome(&mut self, tag: &str) {
        self.set("outcome", tag);
    }

    pub fn stats(&mut self, s: &EmbedStats) {
        self.set("reduced_vertices", s.reduced_vertices);
        self.set("reduced_edges", s.reduced_edges);
        self.set("rho", s.rho);
        self.set("q", s.q);
        self.set("rho_downgraded", s.rho_downgraded);
        self.set("L", s.hop_limit);
        self.set("eta", s.eta);
        self.set("attempts", s.attempts);
        self.set("outer_iterations", s.outer_iterations);
        self.set("routing_samples", s.routing_samples);
    }

    pub fn certificate(&mut self, cut: &Cut) {
        self.set("outcome", "not_an_expander");
        self.set("certificate_sparsity", frac(cut.sparsity));
        self.set("certificate_side", cut.side_a.len().min(cut.side_b.len()));
        self.set("certificate_crossing", cut.crossing_edges.len());
    }

    pub fn failures(&mut self, failures: &[StageFailure]) {
        self.set("outcome", "failed");
        self.set("failures", failures.len());
        for (i, f) in failures.iter().enumerate() {
            self.set(&format!("failure.{i}"), f);
        }
    }

    pub fn error(&mut self, msg: &str) {
        self.set("outcome", "error");
        self.set("error", msg);
    }

    pub fn to_text(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
