//! Query file parsing and validation. Schema errors carry JSON-pointer
//! paths to the offending field.

use std::collections::BTreeMap;

use serde_json::Value;

use strata_core::automata::{parse_regex, Alphabet, Dfa};
use strata_core::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "input error at `{}`: {}", self.pointer, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Separate,
    Cover,
    Member,
    Imprint,
}

impl Task {
    pub fn parse(name: &str) -> Option<Task> {
        match name {
            "separate" => Some(Task::Separate),
            "cover" => Some(Task::Cover),
            "member" => Some(Task::Member),
            "imprint" => Some(Task::Imprint),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub timing: bool,
    pub trace: bool,
    pub subword_bound: usize,
    pub basis: Option<String>,
    pub limits: Limits,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            timing: false,
            trace: false,
            subword_bound: 3,
            basis: None,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub alphabet: Alphabet,
    pub languages: BTreeMap<String, Dfa>,
    pub task: Task,
    pub level: String,
    pub args: Vec<String>,
    pub options: Options,
}

impl QuerySpec {
    pub fn language(&self, name: &str, pointer: &str) -> Result<&Dfa, InputError> {
        self.languages
            .get(name)
            .ok_or_else(|| InputError::new(pointer, format!("unknown language `{name}`")))
    }
}

pub fn parse_query(text: &str) -> Result<QuerySpec, InputError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| InputError::new("", format!("not valid JSON: {e}")))?;
    let root = object(&value, "")?;

    // Alphabet.
    let alphabet_value = field(root, "alphabet", "")?;
    let letters = array(alphabet_value, "/alphabet")?;
    let mut chars = Vec::new();
    for (i, letter) in letters.iter().enumerate() {
        let s = string(letter, &format!("/alphabet/{i}"))?;
        let mut it = s.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => {
                return Err(InputError::new(
                    format!("/alphabet/{i}"),
                    "letters are single characters",
                ))
            }
        }
    }
    let alphabet = Alphabet::new(chars).map_err(|e| InputError::new("/alphabet", e.to_string()))?;

    // Languages.
    let languages_value = field(root, "languages", "")?;
    let language_specs = object(languages_value, "/languages")?;
    let mut languages = BTreeMap::new();
    for (name, spec) in language_specs {
        let pointer = format!("/languages/{name}");
        let spec = object(spec, &pointer)?;
        let dfa = match (spec.get("regex"), spec.get("dfa")) {
            (Some(regex_value), None) => {
                let pattern = string(regex_value, &format!("{pointer}/regex"))?;
                let regex = parse_regex(pattern, &alphabet)
                    .map_err(|e| InputError::new(format!("{pointer}/regex"), e.to_string()))?;
                Dfa::from_regex(&regex, &alphabet)
            }
            (None, Some(dfa_value)) => parse_dfa(dfa_value, &alphabet, &format!("{pointer}/dfa"))?,
            _ => {
                return Err(InputError::new(
                    pointer,
                    "language needs exactly one of `regex` or `dfa`",
                ))
            }
        };
        languages.insert(name.clone(), dfa);
    }

    // Task, level, args.
    let task_name = string(field(root, "task", "")?, "/task")?;
    let task = Task::parse(task_name)
        .ok_or_else(|| InputError::new("/task", format!("unknown task `{task_name}`")))?;
    let level = string(field(root, "level", "")?, "/level")?.to_string();
    let args_value = field(root, "args", "")?;
    let mut args = Vec::new();
    for (i, arg) in array(args_value, "/args")?.iter().enumerate() {
        let name = string(arg, &format!("/args/{i}"))?;
        if !languages.contains_key(name) {
            return Err(InputError::new(
                format!("/args/{i}"),
                format!("unknown language `{name}`"),
            ));
        }
        args.push(name.to_string());
    }
    check_arity(task, args.len())?;

    // Options.
    let mut options = Options::default();
    if let Some(options_value) = root.get("options") {
        let map = object(options_value, "/options")?;
        for (key, entry) in map {
            let pointer = format!("/options/{key}");
            match key.as_str() {
                "timing" => options.timing = boolean(entry, &pointer)?,
                "trace" => options.trace = boolean(entry, &pointer)?,
                "k" => options.subword_bound = unsigned(entry, &pointer)?,
                "basis" => options.basis = Some(string(entry, &pointer)?.to_string()),
                "max_monoid" => options.limits.max_monoid = unsigned(entry, &pointer)?,
                "max_n" => options.limits.max_rating_base = unsigned(entry, &pointer)?,
                "max_frontier" => options.limits.max_frontier = unsigned(entry, &pointer)?,
                "max_wall_s" => {
                    options.limits.max_wall = Some(std::time::Duration::from_secs(unsigned(
                        entry, &pointer,
                    )?
                        as u64))
                }
                other => {
                    return Err(InputError::new(
                        pointer,
                        format!("unknown option `{other}`"),
                    ))
                }
            }
        }
    }

    Ok(QuerySpec {
        alphabet,
        languages,
        task,
        level,
        args,
        options,
    })
}

pub fn check_arity(task: Task, count: usize) -> Result<(), InputError> {
    let ok = match task {
        Task::Separate => count == 2,
        Task::Cover => count >= 1,
        Task::Member => count == 1,
        Task::Imprint => count >= 1,
    };
    if ok {
        Ok(())
    } else {
        Err(InputError::new(
            "/args",
            match task {
                Task::Separate => "task `separate` takes exactly two language names",
                Task::Cover => "task `cover` takes at least one language name",
                Task::Member => "task `member` takes exactly one language name",
                Task::Imprint => "task `imprint` takes at least one language name",
            },
        ))
    }
}

fn parse_dfa(value: &Value, alphabet: &Alphabet, pointer: &str) -> Result<Dfa, InputError> {
    let map = object(value, pointer)?;
    let states = unsigned(field(map, "states", pointer)?, &format!("{pointer}/states"))?;
    let delta_value = array(field(map, "delta", pointer)?, &format!("{pointer}/delta"))?;
    if delta_value.len() != states {
        return Err(InputError::new(
            format!("{pointer}/delta"),
            format!("expected {states} rows, found {}", delta_value.len()),
        ));
    }
    let mut delta = Vec::with_capacity(states);
    for (q, row_value) in delta_value.iter().enumerate() {
        let row_pointer = format!("{pointer}/delta/{q}");
        let row = array(row_value, &row_pointer)?;
        let mut targets = Vec::with_capacity(row.len());
        for (a, target) in row.iter().enumerate() {
            targets.push(unsigned(target, &format!("{row_pointer}/{a}"))?);
        }
        delta.push(targets);
    }
    let initial = unsigned(
        field(map, "initial", pointer)?,
        &format!("{pointer}/initial"),
    )?;
    let mut accepting = std::collections::BTreeSet::new();
    let accepting_value = array(
        field(map, "accepting", pointer)?,
        &format!("{pointer}/accepting"),
    )?;
    for (i, q) in accepting_value.iter().enumerate() {
        accepting.insert(unsigned(q, &format!("{pointer}/accepting/{i}"))?);
    }
    Dfa::new(alphabet.clone(), delta, initial, accepting)
        .map_err(|e| InputError::new(pointer, e.to_string()))
}

fn object<'v>(
    value: &'v Value,
    pointer: &str,
) -> Result<&'v serde_json::Map<String, Value>, InputError> {
    value
        .as_object()
        .ok_or_else(|| InputError::new(pointer, "expected an object"))
}

fn array<'v>(value: &'v Value, pointer: &str) -> Result<&'v Vec<Value>, InputError> {
    value
        .as_array()
        .ok_or_else(|| InputError::new(pointer, "expected an array"))
}

fn string<'v>(value: &'v Value, pointer: &str) -> Result<&'v str, InputError> {
    value
        .as_str()
        .ok_or_else(|| InputError::new(pointer, "expected a string"))
}

fn boolean(value: &Value, pointer: &str) -> Result<bool, InputError> {
    value
        .as_bool()
        .ok_or_else(|| InputError::new(pointer, "expected a boolean"))
}

fn unsigned(value: &Value, pointer: &str) -> Result<usize, InputError> {
    value
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| InputError::new(pointer, "expected an unsigned integer"))
}

fn field<'v>(
    map: &'v serde_json::Map<String, Value>,
    name: &str,
    parent: &str,
) -> Result<&'v Value, InputError> {
    map.get(name)
        .ok_or_else(|| InputError::new(format!("{parent}/{name}"), "missing required field"))
}
