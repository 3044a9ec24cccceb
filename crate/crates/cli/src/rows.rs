//! Delimited rows with one weight column.

use std::io::BufRead;

use crate::CliError;

/// Where the weight lives in each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightColumn {
    /// The last field of each row.
    Last,
    /// A 1-based field index.
    Index(usize),
    /// A header name; the first line of every input is then a header.
    Name(String),
}

impl std::str::FromStr for WeightColumn {
    type Err = std::convert::Infallible;

    /// Digits are a 1-based index, anything else is a header name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => WeightColumn::Index(i),
            Err(_) => WeightColumn::Name(s.to_string()),
        })
    }
}

/// How rows are split and which weights are admissible.
#[derive(Debug, Clone)]
pub struct RowFormat {
    pub column: WeightColumn,
    pub delimiter: char,
    pub lenient_zero: bool,
}

impl Default for RowFormat {
    fn default() -> Self {
        Self {
            column: WeightColumn::Last,
            delimiter: '\t',
            lenient_zero: false,
        }
    }
}

/// One named input.
pub struct Input {
    pub name: String,
    pub reader: Box<dyn BufRead + Send>,
}

impl Input {
    pub fn new(name: impl Into<String>, reader: impl BufRead + Send + 'static) -> Self {
        Self {
            name: name.into(),
            reader: Box::new(reader),
        }
    }
}

/// Iterates over `(row, weight)` pairs of one input, reading it once, front
/// to back. Blank lines are ignored; line numbers count them.
pub struct Rows<'a> {
    input: Input,
    format: &'a RowFormat,
    field: Option<usize>,
    line_no: usize,
    buf: String,
    failed: bool,
}

impl<'a> Rows<'a> {
    pub fn new(input: Input, format: &'a RowFormat) -> Self {
        let field = match format.column {
            WeightColumn::Index(i) => Some(i),
            _ => None,
        };
        Self {
            input,
            format,
            field,
            line_no: 0,
            buf: String::new(),
            failed: false,
        }
    }

    fn malformed(&self, message: String) -> CliError {
        CliError::Malformed {
            input: self.input.name.clone(),
            line: self.line_no,
            message,
        }
    }

    /// Reads the next line without its terminator. `None` at end of input.
    fn next_line(&mut self) -> Result<Option<&str>, CliError> {
        self.buf.clear();
        let n = self
            .input
            .reader
            .read_line(&mut self.buf)
            .map_err(|source| CliError::Io {
                path: self.input.name.clone(),
                source,
            })?;
        if n == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        let line = self.buf.strip_suffix('\n').unwrap_or(&self.buf);
        Ok(Some(line.strip_suffix('\r').unwrap_or(line)))
    }

    fn read_header(&mut self, name: &str) -> Result<(), CliError> {
        let delimiter = self.format.delimiter;
        let Some(header) = self.next_line()? else {
            return Ok(());
        };
        match header.split(delimiter).position(|f| f == name) {
            Some(i) => {
                self.field = Some(i + 1);
                Ok(())
            }
            None => Err(self.malformed(format!("no column named {name:?} in header"))),
        }
    }

    fn parse(&self, line: &str) -> Result<f64, CliError> {
        let mut fields = line.split(self.format.delimiter);
        let field = match self.field {
            Some(0) => return Err(self.malformed("weight column index starts at 1".into())),
            Some(i) => fields.nth(i - 1),
            None => fields.next_back(),
        };
        let Some(field) = field else {
            return Err(
                self.malformed(format!("missing weight column {}", self.field.unwrap_or(0)))
            );
        };
        let weight: f64 = field
            .trim()
            .parse()
            .map_err(|_| self.malformed(format!("weight {field:?} is not a number")))?;
        let admissible =
            (weight > 0.0 && weight.is_finite()) || (weight == 0.0 && self.format.lenient_zero);
        if !admissible {
            return Err(self.malformed(format!("weight {weight} must be positive and finite")));
        }
        Ok(weight)
    }

    fn next_row(&mut self) -> Result<Option<(String, f64)>, CliError> {
        if self.field.is_none() {
            if let WeightColumn::Name(name) = &self.format.column {
                let name = name.clone();
                self.read_header(&name)?;
                if self.field.is_none() {
                    // Empty input: no header, no rows.
                    return Ok(None);
                }
            }
        }
        loop {
            let Some(line) = self.next_line()? else {
                return Ok(None);
            };
            if line.is_empty() {
                continue;
            }
            let line = line.to_string();
            let weight = self.parse(&line)?;
            return Ok(Some((line, weight)));
        }
    }
}

impl Iterator for Rows<'_> {
    type Item = Result<(String, f64), CliError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let row = self.next_row().transpose();
        self.failed = matches!(row, Some(Err(_)));
        row
    }
}
