use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::Metrics;
use crate::bounds::Bounds;
use crate::error::{Result, TxaiError};
use crate::inference::{select_winner, Antecedent, DegreeTable, Engine, Rule, RuleBase, MAX_ANTECEDENTS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub generations: usize,
    pub population: usize,
    pub max_antecedents: usize,
    pub max_rules: usize,
    pub prune_threshold: f64,
    /// Rules per chromosome in the initial population are drawn from `1..=initial_rules`.
    pub initial_rules: usize,
    pub crossover_rate: f64,
    /// Per-rule probability of a CoL flip, antecedent toggle or consequent flip.
    pub mutation_rate: f64,
    pub add_rule_rate: f64,
    pub delete_rule_rate: f64,
    pub tournament: usize,
    pub elitism: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            generations: 20,
            population: 50,
            max_antecedents: 3,
            max_rules: 30,
            prune_threshold: 0.001,
            initial_rules: 8,
            crossover_rate: 0.8,
            mutation_rate: 0.2,
            add_rule_rate: 0.2,
            delete_rule_rate: 0.1,
            tournament: 3,
            elitism: 1,
            seed: 42,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("population", self.population),
            ("max_antecedents", self.max_antecedents),
            ("max_rules", self.max_rules),
            ("initial_rules", self.initial_rules),
            ("tournament", self.tournament),
            ("elitism", self.elitism),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(TxaiError::Config(format!("{name} must be at least 1")));
            }
        }
        if self.max_antecedents > MAX_ANTECEDENTS {
            return Err(TxaiError::Config(format!("max_antecedents is capped at {MAX_ANTECEDENTS}")));
        }
        if self.elitism > self.population {
            return Err(TxaiError::Config("elitism exceeds the population".into()));
        }
        for (name, v) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
            ("add_rule_rate", self.add_rule_rate),
            ("delete_rule_rate", self.delete_rule_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(TxaiError::Config(format!("{name} {v} outside [0, 1]")));
            }
        }
        if !(self.prune_threshold >= 0.0) {
            return Err(TxaiError::Config("prune threshold must be non-negative".into()));
        }
        Ok(())
    }
}

/// Training and validation data for one rule base.
pub struct LearningTask<'a> {
    pub engine: &'a Engine,
    pub train: &'a [(&'a DegreeTable, usize)],
    pub validation: &'a [(&'a DegreeTable, usize)],
    /// Labels per antecedent variable.
    pub labels: &'a [usize],
    pub n_classes: usize,
    pub interval: Option<usize>,
    pub positive: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaOutcome {
    pub rule_base: RuleBase,
    /// Validation balanced accuracy of `rule_base`.
    pub fitness: f64,
    /// Best validation balanced accuracy after the initial population and each generation.
    pub trace: Vec<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Gene {
    antecedents: Vec<Antecedent>,
    consequent: usize,
}

type Chromosome = Vec<Gene>;

struct Evaluated {
    weights: Vec<Bounds>,
    /// Crisp association with every validation instance.
    crisp: Vec<f64>,
    top: f64,
    kept: bool,
}

struct Learner<'a> {
    task: &'a LearningTask<'a>,
    config: &'a GaConfig,
    cache: HashMap<Gene, Evaluated>,
    truth: Vec<usize>,
}

impl<'a> Learner<'a> {
    fn evaluate_gene(&self, gene: &Gene) -> Result<Evaluated> {
        let engine = self.task.engine;
        let weights = engine.rule_weight(&gene.antecedents, gene.consequent, self.task.train.iter().copied())?;
        let kept = weights.iter().any(|w| w.upper >= self.config.prune_threshold);
        let crisp = self
            .task
            .validation
            .iter()
            .map(|(t, _)| engine.crisp_unchecked(&gene.antecedents, &weights, t))
            .collect();
        let top = weights.last().map_or(0.0, Bounds::midpoint);
        Ok(Evaluated { weights, crisp, top, kept })
    }

    /// Computes unseen genes in parallel, inserting in first-seen order.
    fn fill_cache(&mut self, population: &[Chromosome]) -> Result<()> {
        let mut seen = HashSet::new();
        let fresh: Vec<&Gene> = population
            .iter()
            .flatten()
            .filter(|g| !self.cache.contains_key(*g) && seen.insert(*g))
            .collect();
        let results: Vec<Result<Evaluated>> = fresh.par_iter().map(|g| self.evaluate_gene(g)).collect();
        for (g, r) in fresh.into_iter().zip(results) {
            self.cache.insert(g.clone(), r?);
        }
        Ok(())
    }

    /// Kept genes of a chromosome in order, at most `max_rules` of them. Of genes
    /// sharing antecedents only the one with the higher top weight stays, in the
    /// slot of the first; same firing strength means the weaker one hardly ever wins.
    fn active<'c>(&self, chromosome: &'c Chromosome) -> Vec<&'c Gene> {
        let mut slot: HashMap<&[Antecedent], usize> = HashMap::new();
        let mut out: Vec<&Gene> = Vec::new();
        for g in chromosome.iter().filter(|g| self.cache[*g].kept) {
            match slot.get(g.antecedents.as_slice()) {
                Some(&k) => {
                    if self.cache[g].top > self.cache[out[k]].top {
                        out[k] = g;
                    }
                }
                None => {
                    slot.insert(&g.antecedents, out.len());
                    out.push(g);
                }
            }
        }
        out.truncate(self.config.max_rules);
        out
    }

    fn fitness(&self, chromosome: &Chromosome) -> f64 {
        let active = self.active(chromosome);
        let evaluated: Vec<&Evaluated> = active.iter().map(|g| &self.cache[*g]).collect();
        let top: Vec<f64> = evaluated.iter().map(|e| e.top).collect();
        let mut crisp = vec![0.0; evaluated.len()];
        let predicted: Vec<Option<usize>> = (0..self.truth.len())
            .map(|n| {
                for (slot, e) in crisp.iter_mut().zip(&evaluated) {
                    *slot = e.crisp[n];
                }
                select_winner(&crisp, &top).map(|p| active[p].consequent)
            })
            .collect();
        Metrics::compute(&self.truth, &predicted, self.task.n_classes, self.task.positive).balanced_accuracy
    }

    fn decode(&self, chromosome: &Chromosome) -> Result<RuleBase> {
        let rules = self
            .active(chromosome)
            .into_iter()
            .map(|g| {
                Rule::new(self.task.interval, g.antecedents.clone(), g.consequent, self.cache[g].weights.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RuleBase::new(self.task.interval, rules))
    }

    fn random_gene(&self, rng: &mut ChaCha8Rng) -> Gene {
        let vars = self.task.labels.len();
        let k = rng.gen_range(1..=self.config.max_antecedents.min(vars));
        let mut chosen: Vec<usize> = (0..vars).collect();
        chosen.shuffle(rng);
        let antecedents = chosen[..k]
            .iter()
            .map(|&v| Antecedent::new(v, rng.gen_range(0..self.task.labels[v])))
            .collect();
        canonical(antecedents, rng.gen_range(0..self.task.n_classes))
    }

    fn random_chromosome(&self, rng: &mut ChaCha8Rng) -> Chromosome {
        let n = rng.gen_range(1..=self.config.initial_rules.min(self.config.max_rules));
        (0..n).map(|_| self.random_gene(rng)).collect()
    }

    fn mutate_gene(&self, gene: &Gene, rng: &mut ChaCha8Rng) -> Gene {
        let labels = self.task.labels;
        let mut ants = gene.antecedents.clone();
        let mut consequent = gene.consequent;
        match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(0..ants.len());
                let v = ants[k].variable;
                if labels[v] > 1 {
                    let shift = rng.gen_range(1..labels[v]);
                    ants[k].label = (ants[k].label + shift) % labels[v];
                }
            }
            1 => {
                let v = rng.gen_range(0..labels.len());
                if let Some(pos) = ants.iter().position(|a| a.variable == v) {
                    if ants.len() > 1 {
                        ants.remove(pos);
                    }
                } else if ants.len() < self.config.max_antecedents {
                    ants.push(Antecedent::new(v, rng.gen_range(0..labels[v])));
                }
            }
            _ => {
                if self.task.n_classes > 1 {
                    consequent = (consequent + rng.gen_range(1..self.task.n_classes)) % self.task.n_classes;
                }
            }
        }
        canonical(ants, consequent)
    }

    fn mutate(&self, mut c: Chromosome, rng: &mut ChaCha8Rng) -> Chromosome {
        for g in c.iter_mut() {
            if rng.gen_bool(self.config.mutation_rate) {
                *g = self.mutate_gene(g, rng);
            }
        }
        if c.len() < self.config.max_rules && rng.gen_bool(self.config.add_rule_rate) {
            let pos = rng.gen_range(0..=c.len());
            c.insert(pos, self.random_gene(rng));
        }
        if c.len() > 1 && rng.gen_bool(self.config.delete_rule_rate) {
            let pos = rng.gen_range(0..c.len());
            c.remove(pos);
        }
        c
    }

    fn tournament<'p>(&self, pop: &'p [Chromosome], fit: &[f64], rng: &mut ChaCha8Rng) -> &'p Chromosome {
        let mut best = rng.gen_range(0..pop.len());
        for _ in 1..self.config.tournament {
            let c = rng.gen_range(0..pop.len());
            if fit[c] > fit[best] || (fit[c] == fit[best] && c < best) {
                best = c;
            }
        }
        &pop[best]
    }

    fn crossover(&self, a: &Chromosome, b: &Chromosome, rng: &mut ChaCha8Rng) -> (Chromosome, Chromosome) {
        let i = rng.gen_range(0..=a.len());
        let j = rng.gen_range(0..=b.len());
        let mut c1: Chromosome = a[..i].iter().chain(&b[j..]).cloned().collect();
        let mut c2: Chromosome = b[..j].iter().chain(&a[i..]).cloned().collect();
        for c in [&mut c1, &mut c2] {
            c.truncate(self.config.max_rules);
            if c.is_empty() {
                c.push(self.random_gene(rng));
            }
        }
        (c1, c2)
    }
}

fn canonical(mut antecedents: Vec<Antecedent>, consequent: usize) -> Gene {
    antecedents.sort();
    Gene { antecedents, consequent }
}

/// Evolves a rule base maximising validation balanced accuracy.
pub fn learn_rulebase(task: &LearningTask<'_>, config: &GaConfig) -> Result<GaOutcome> {
    config.validate()?;
    if task.train.is_empty() {
        return Err(TxaiError::Input("rule learning needs training data".into()));
    }
    if task.labels.is_empty() || task.labels.contains(&0) {
        return Err(TxaiError::Config("every antecedent variable needs at least one label".into()));
    }
    let first = task.train[0].1;
    if task.train.iter().all(|&(_, c)| c == first) {
        log::warn!("training data for interval {:?} holds a single class; emitting a trivial rule base", task.interval);
        return trivial_outcome(task, config, first);
    }
    let validation_owned;
    let task = if task.validation.is_empty() {
        log::warn!("no validation data for interval {:?}; scoring on training data", task.interval);
        validation_owned = LearningTask { validation: task.train, ..*task };
        &validation_owned
    } else {
        task
    };

    let mut learner = Learner {
        task,
        config,
        cache: HashMap::new(),
        truth: task.validation.iter().map(|&(_, c)| c).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut population: Vec<Chromosome> = (0..config.population).map(|_| learner.random_chromosome(&mut rng)).collect();
    let mut trace = Vec::with_capacity(config.generations + 1);
    let mut evaluations = 0;

    let mut fitness = score(&mut learner, &population, &mut evaluations)?;
    trace.push(best_of(&fitness).1);
    for _ in 0..config.generations {
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        let mut next: Vec<Chromosome> = order[..config.elitism].iter().map(|&i| population[i].clone()).collect();
        while next.len() < config.population {
            let a = learner.tournament(&population, &fitness, &mut rng).clone();
            let b = learner.tournament(&population, &fitness, &mut rng).clone();
            let (c1, c2) = if rng.gen_bool(config.crossover_rate) {
                learner.crossover(&a, &b, &mut rng)
            } else {
                (a, b)
            };
            next.push(learner.mutate(c1, &mut rng));
            if next.len() < config.population {
                next.push(learner.mutate(c2, &mut rng));
            }
        }
        population = next;
        fitness = score(&mut learner, &population, &mut evaluations)?;
        trace.push(best_of(&fitness).1);
    }
    let (best, best_fit) = best_of(&fitness);
    let mut rule_base = learner.decode(&population[best])?;
    rule_base.dedup();
    rule_base.prune(config.prune_threshold);
    Ok(GaOutcome { rule_base, fitness: best_fit, trace, evaluations })
}

fn score(learner: &mut Learner<'_>, population: &[Chromosome], evaluations: &mut usize) -> Result<Vec<f64>> {
    learner.fill_cache(population)?;
    *evaluations += population.len();
    let l = &*learner;
    Ok(population.par_iter().map(|c| l.fitness(c)).collect())
}

fn best_of(fitness: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for (i, &f) in fitness.iter().enumerate() {
        if f > fitness[best] {
            best = i;
        }
    }
    (best, fitness[best])
}

/// Single-class training data: the strongest single-antecedent rule for that class.
fn trivial_outcome(task: &LearningTask<'_>, config: &GaConfig, class: usize) -> Result<GaOutcome> {
    let mut best: Option<Rule> = None;
    for (v, &n) in task.labels.iter().enumerate() {
        for j in 0..n {
            let ants = vec![Antecedent::new(v, j)];
            let w = task.engine.rule_weight(&ants, class, task.train.iter().copied())?;
            let rule = Rule::new(task.interval, ants, class, w)?;
            if best.as_ref().is_none_or(|b| rule.top_weight() > b.top_weight()) {
                best = Some(rule);
            }
        }
    }
    let rule_base = RuleBase::new(task.interval, best.into_iter().collect());
    let truth: Vec<usize> = task.validation.iter().map(|&(_, c)| c).collect();
    let predicted: Vec<Option<usize>> = task
        .validation
        .iter()
        .map(|(t, _)| task.engine.classify(&rule_base, t).map(|p| p.label))
        .collect::<Result<_>>()?;
    let fitness = if truth.is_empty() {
        1.0
    } else {
        Metrics::compute(&truth, &predicted, task.n_classes, task.positive).balanced_accuracy
    };
    Ok(GaOutcome { rule_base, fitness, trace: vec![fitness; config.generations + 1], evaluations: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::ZLevels;

    /// Two variables with three labels; class 1 exactly when variable 0 is High.
    fn separable(n: usize, seed: u64) -> Vec<(DegreeTable, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let hot = rng.gen_range(0..3);
                let other = rng.gen_range(0..3);
                let deg = |winner: usize, j: usize| {
                    let v = if j == winner { 0.9 } else { 0.1 };
                    vec![Bounds { lower: v * 0.9, upper: v }; 2]
                };
                let table = DegreeTable::new(vec![
                    (0..3).map(|j| deg(hot, j)).collect(),
                    (0..3).map(|j| deg(other, j)).collect(),
                ])
                .unwrap();
                (table, usize::from(hot == 2))
            })
            .collect()
    }

    fn run(config: &GaConfig) -> GaOutcome {
        let engine = Engine::new(ZLevels::new(vec![0.5, 1.0]).unwrap(), Default::default());
        let train = separable(200, 1);
        let valid = separable(60, 2);
        let tr: Vec<(&DegreeTable, usize)> = train.iter().map(|(t, c)| (t, *c)).collect();
        let va: Vec<(&DegreeTable, usize)> = valid.iter().map(|(t, c)| (t, *c)).collect();
        let task = LearningTask {
            engine: &engine,
            train: &tr,
            validation: &va,
            labels: &[3, 3],
            n_classes: 2,
            interval: Some(0),
            positive: Some(1),
        };
        learn_rulebase(&task, config).unwrap()
    }

    #[test]
    fn learns_separable_rule() {
        let out = run(&GaConfig::default());
        assert!(out.fitness >= 0.95, "fitness {}", out.fitness);
        assert!(out.trace.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(out.trace.len(), 21);
        assert!(out.rule_base.len() <= 30);
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = GaConfig { generations: 5, ..GaConfig::default() };
        assert_eq!(run(&cfg), run(&cfg));
    }

    #[test]
    fn zero_generations_is_initial_best() {
        let out = run(&GaConfig { generations: 0, ..GaConfig::default() });
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0], out.fitness);
    }

    #[test]
    fn single_class_gives_trivial_base() {
        let engine = Engine::new(ZLevels::new(vec![0.5, 1.0]).unwrap(), Default::default());
        let data: Vec<(DegreeTable, usize)> = separable(30, 3).into_iter().map(|(t, _)| (t, 0)).collect();
        let refs: Vec<(&DegreeTable, usize)> = data.iter().map(|(t, c)| (t, *c)).collect();
        let task = LearningTask {
            engine: &engine,
            train: &refs,
            validation: &refs,
            labels: &[3, 3],
            n_classes: 2,
            interval: None,
            positive: None,
        };
        let out = learn_rulebase(&task, &GaConfig::default()).unwrap();
        assert_eq!(out.rule_base.len(), 1);
        assert_eq!(out.rule_base.rules[0].consequent, 0);
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig { population: 0, ..GaConfig::default() }.validate().is_err());
        assert!(GaConfig { mutation_rate: 1.5, ..GaConfig::default() }.validate().is_err());
        assert!(GaConfig { max_antecedents: 4, ..GaConfig::default() }.validate().is_err());
    }
}
