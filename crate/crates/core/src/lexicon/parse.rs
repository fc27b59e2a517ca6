use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Category, CategoryId, Lexicon, LexiconEntry, LexiconError};

enum Section {
    Preamble,
    Categories,
    Entries,
}

fn syntax(line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_id(field: &str, line: usize) -> Result<CategoryId, LexiconError> {
    field
        .trim()
        .parse::<u32>()
        .map(CategoryId)
        .map_err(|_| syntax(line, format!("invalid category id {:?}", field.trim())))
}

pub(super) fn parse(text: &str) -> Result<Lexicon, LexiconError> {
    let mut section = Section::Preamble;
    let mut categories: BTreeMap<CategoryId, Category> = BTreeMap::new();
    let mut entries: Vec<LexiconEntry> = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        last_line = line_no;
        let is_marker = line.trim() == "%";

        match section {
            Section::Preamble => {
                if !is_marker {
                    return Err(syntax(line_no, "expected '%' opening the category block"));
                }
                section = Section::Categories;
            }
            Section::Categories => {
                if is_marker {
                    section = Section::Entries;
                    continue;
                }
                let (id, name) = line
                    .split_once('\t')
                    .ok_or_else(|| syntax(line_no, "category line must be <id><TAB><name>"))?;
                let id = parse_id(id, line_no)?;
                let name = name.trim();
                if name.is_empty() {
                    return Err(syntax(line_no, format!("category {id} has an empty name")));
                }
                if categories.contains_key(&id) {
                    return Err(syntax(line_no, format!("category {id} declared twice")));
                }
                categories.insert(
                    id,
                    Category {
                        id,
                        name: name.to_string(),
                    },
                );
            }
            Section::Entries => {
                if is_marker {
                    return Err(syntax(line_no, "unexpected '%' after the category block"));
                }
                let mut fields = line.split('\t').map(str::trim).filter(|f| !f.is_empty());
                let pattern = fields
                    .next()
                    .ok_or_else(|| syntax(line_no, "missing pattern"))?
                    .to_lowercase();
                validate_pattern(&pattern, line_no)?;

                let mut cats = BTreeSet::new();
                for field in fields {
                    let id = parse_id(field, line_no)?;
                    if !categories.contains_key(&id) {
                        return Err(LexiconError::UnknownCategoryId { line: line_no, id });
                    }
                    cats.insert(id);
                }
                if cats.is_empty() {
                    return Err(syntax(line_no, format!("pattern {pattern:?} has no categories")));
                }
                if let Some(&first_line) = seen.get(&pattern) {
                    return Err(LexiconError::DuplicatePattern {
                        line: line_no,
                        first_line,
                        pattern,
                    });
                }
                seen.insert(pattern.clone(), line_no);
                entries.push(LexiconEntry {
                    pattern,
                    categories: cats,
                });
            }
        }
    }

    match section {
        Section::Entries => Ok(Lexicon::from_parts(categories, entries)),
        Section::Preamble => Err(syntax(last_line.max(1), "missing category block")),
        Section::Categories => Err(syntax(last_line.max(1), "unterminated category block")),
    }
}

fn validate_pattern(pattern: &str, line: usize) -> Result<(), LexiconError> {
    if pattern.chars().any(char::is_whitespace) {
        return Err(syntax(line, format!("pattern {pattern:?} contains whitespace")));
    }
    let stem = pattern.strip_suffix('*').unwrap_or(pattern);
    if stem.contains('*') {
        return Err(syntax(line, format!("pattern {pattern:?} has an internal wildcard")));
    }
    if stem.is_empty() {
        return Err(syntax(line, "wildcard pattern needs a non-empty stem"));
    }
    Ok(())
}
