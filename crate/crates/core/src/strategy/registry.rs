use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    DistractionStrategy, GreedyP1, K24Strategy, K2tStrategy, RandomP1, ScriptedP1, Strategy,
    StrategyError,
};

pub type Factory =
    Arc<dyn Fn(Option<&str>) -> Result<Box<dyn Strategy>, StrategyError> + Send + Sync>;

/// Strategies by name. A spec is `name` or `name:arg`; the factory
/// receives the argument.
#[derive(Clone, Default)]
pub struct StrategyRegistry {
    factories: BTreeMap<String, Factory>,
}

fn parse_num<T: std::str::FromStr>(name: &str, arg: Option<&str>) -> Result<T, StrategyError> {
    let a = arg.ok_or_else(|| StrategyError::BadSpec(format!("{name} needs an argument")))?;
    a.parse()
        .map_err(|_| StrategyError::BadSpec(format!("{name}: bad argument {a:?}")))
}

impl StrategyRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        r.register("k24", |_| Ok(Box::new(K24Strategy::new())));
        r.register("k2t", |arg| {
            Ok(Box::new(K2tStrategy::new(parse_num("k2t", arg)?)?))
        });
        r.register("distraction", |_| Ok(Box::new(DistractionStrategy::new())));
        r.register("p1-random", |arg| {
            Ok(Box::new(RandomP1::new(parse_num("p1-random", arg)?)))
        });
        r.register("p1-greedy", |arg| {
            let seed = match arg {
                Some(_) => Some(parse_num("p1-greedy", arg)?),
                None => None,
            };
            Ok(Box::new(GreedyP1::new(seed)))
        });
        r.register("p1-scripted", |arg| {
            let path = arg.ok_or_else(|| StrategyError::BadSpec("p1-scripted needs a file".into()))?;
            Ok(Box::new(ScriptedP1::from_file(path)?))
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(Option<&str>) -> Result<Box<dyn Strategy>, StrategyError> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn create(&self, spec: &str) -> Result<Box<dyn Strategy>, StrategyError> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let f = self
            .factories
            .get(name)
            .ok_or_else(|| StrategyError::BadSpec(format!("unknown strategy {name:?}")))?;
        f(arg)
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }
}
