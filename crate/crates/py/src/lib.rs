//! Python bindings. `Word` and `Algebra` wrap the two core types; module
//! functions cover enumeration, counting, axioms, and amalgamation. Cap
//! and parse failures surface as `ValueError`.

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use lmonoid::amalgam::{amalgamate, search_amalgam, verify_amalgam, Span, WordEmbedding};
use lmonoid::congruence::{all_congruences, has_cep, is_sdi, monolith};
use lmonoid::term::{failure_witness, gamma, sigma, sigma_dual, Equation};
use lmonoid::variety::{amalgamation_status, enumerate_words, WordFilter};
use lmonoid::{decompose, word_embeds, word_is_sdi, CapExceeded, FinOrdMonoid, SumWord};

fn cap_err(e: CapExceeded) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite nested sum named by its letters, such as `G3+C2`.
#[pyclass(frozen, eq, hash)]
#[derive(Clone, PartialEq, Hash)]
struct Word {
    inner: SumWord,
}

#[pymethods]
impl Word {
    /// Parses `+`-separated letters; `0` is the empty word.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner: SumWord =
            text.parse().map_err(|e| PyValueError::new_err(format!("{e}")))?;
        Ok(Word { inner })
    }

    /// Letter tokens in order.
    #[getter]
    fn letters(&self) -> Vec<&'static str> {
        self.inner.letters().iter().map(|l| l.token()).collect()
    }

    /// Number of elements of the denoted algebra.
    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn dual(&self) -> Word {
        Word { inner: self.inner.dual() }
    }

    fn opposite(&self) -> Word {
        Word { inner: self.inner.opposite() }
    }

    fn is_sdi(&self) -> bool {
        word_is_sdi(&self.inner)
    }

    /// Leftmost embedding witness into `other`, or `None`.
    fn embeds(&self, other: &Word) -> Option<Vec<usize>> {
        word_embeds(&self.inner, &other.inner)
    }

    /// The algebra this word denotes.
    fn compose(&self) -> Algebra {
        Algebra { inner: lmonoid::compose(&self.inner) }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.inner)
    }
}

/// A finite idempotent ordered monoid on the chain `0 < 1 < … < n-1`.
#[pyclass(frozen, eq)]
#[derive(Clone, PartialEq)]
struct Algebra {
    inner: FinOrdMonoid,
}

#[pymethods]
impl Algebra {
    /// Parses the text format: a `size unit` header, then one row per line.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner =
            FinOrdMonoid::from_text(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Algebra { inner })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn unit(&self) -> usize {
        self.inner.unit()
    }

    /// Multiplication table as rows.
    fn table(&self) -> Vec<Vec<usize>> {
        let n = self.inner.size();
        (0..n).map(|a| self.inner.table()[a * n..(a + 1) * n].to_vec()).collect()
    }

    fn product(&self, a: usize, b: usize) -> PyResult<usize> {
        let n = self.inner.size();
        if a >= n || b >= n {
            return Err(PyIndexError::new_err(format!("ranks must be below {n}")));
        }
        Ok(self.inner.table()[a * n + b])
    }

    fn text(&self) -> String {
        self.inner.to_text()
    }

    /// The unique word denoting this algebra.
    fn decompose(&self) -> Word {
        Word { inner: decompose(&self.inner) }
    }

    fn is_sdi(&self) -> bool {
        is_sdi(&self.inner)
    }

    /// Smallest congruence above the identity, as block text, or `None`.
    fn monolith(&self) -> Option<String> {
        monolith(&self.inner).map(|c| c.to_string())
    }

    /// Every congruence as block text, coarsest first.
    fn congruences(&self) -> Vec<String> {
        all_congruences(&self.inner).iter().map(|c| c.to_string()).collect()
    }

    fn has_cep(&self) -> PyResult<bool> {
        has_cep(&self.inner).map_err(cap_err)
    }

    /// First failing valuation of the equation, or `None` when it holds.
    fn check(&self, equation: &str) -> PyResult<Option<Vec<usize>>> {
        let eq: Equation =
            equation.parse().map_err(|e| PyValueError::new_err(format!("{e}")))?;
        failure_witness(&self.inner, &eq).map_err(cap_err)
    }

    fn satisfies(&self, equation: &str) -> PyResult<bool> {
        Ok(self.check(equation)?.is_none())
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Algebra('{}')", decompose(&self.inner))
    }
}

fn filter_from(name: &str) -> PyResult<WordFilter> {
    match name {
        "all" => Ok(WordFilter::All),
        "sdi" => Ok(WordFilter::Sdi),
        "commutative" => Ok(WordFilter::Commutative),
        "commutative-sdi" => Ok(WordFilter::CommutativeSdi),
        _ => Err(PyValueError::new_err(format!("unknown filter `{name}`"))),
    }
}

/// All words denoting algebras of the given size, lexicographically.
#[pyfunction]
#[pyo3(name = "enumerate_words", signature = (size, filter = "all"))]
fn enumerate_words_py(size: usize, filter: &str) -> PyResult<Vec<Word>> {
    let words = enumerate_words(size, filter_from(filter)?).map_err(cap_err)?;
    Ok(words.into_iter().map(|inner| Word { inner }).collect())
}

fn check_count_size(n: usize) -> PyResult<usize> {
    // u128 arithmetic stays exact through size 64.
    if n == 0 || n > 64 {
        return Err(PyValueError::new_err("counts are supported for sizes 1 through 64"));
    }
    Ok(n)
}

/// Number of words of size `n`.
#[pyfunction]
fn count_all(n: usize) -> PyResult<u128> {
    Ok(lmonoid::variety::count_i(check_count_size(n)?))
}

/// Number of subdirectly irreducible words of size `n`.
#[pyfunction]
fn count_sdi(n: usize) -> PyResult<u128> {
    Ok(lmonoid::variety::count_s(check_count_size(n)?))
}

/// Number of commutative words of size `n`.
#[pyfunction]
fn count_commutative(n: usize) -> PyResult<u128> {
    Ok(lmonoid::variety::count_comm(check_count_size(n)?))
}

/// Whether `word`'s algebra lies in the variety the generators generate.
#[pyfunction]
#[pyo3(name = "member")]
fn member_py(word: &Word, generators: Vec<Word>) -> PyResult<bool> {
    let gens: Vec<SumWord> = generators.into_iter().map(|w| w.inner).collect();
    lmonoid::variety::member(&word.inner, &gens).map_err(cap_err)
}

#[pyfunction]
#[pyo3(name = "sigma")]
fn sigma_py(n: u32) -> PyResult<String> {
    if n < 2 {
        return Err(PyValueError::new_err("sigma is defined for n >= 2"));
    }
    Ok(sigma(n).to_string())
}

#[pyfunction]
#[pyo3(name = "sigma_dual")]
fn sigma_dual_py(n: u32) -> PyResult<String> {
    if n < 2 {
        return Err(PyValueError::new_err("sigma_dual is defined for n >= 2"));
    }
    Ok(sigma_dual(n).to_string())
}

#[pyfunction]
#[pyo3(name = "gamma")]
fn gamma_py(n: u32) -> PyResult<String> {
    if n < 3 {
        return Err(PyValueError::new_err("gamma is defined for n >= 3"));
    }
    Ok(gamma(n).to_string())
}

fn build_span(
    base: &Word,
    left: &Word,
    f: Vec<usize>,
    right: &Word,
    g: Vec<usize>,
) -> PyResult<Span> {
    let err = |which: &str, e: lmonoid::word::WitnessError| {
        PyValueError::new_err(format!("{which}: {e}"))
    };
    let f = WordEmbedding::new(base.inner.clone(), left.inner.clone(), f)
        .map_err(|e| err("f", e))?;
    let g = WordEmbedding::new(base.inner.clone(), right.inner.clone(), g)
        .map_err(|e| err("g", e))?;
    Span::new(f, g).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Merges a compatible span; returns `(word, left_positions,
/// right_positions, strong)`. Raises on incompatible spans.
#[pyfunction]
#[pyo3(name = "amalgamate")]
fn amalgamate_py(
    base: &Word,
    left: &Word,
    f: Vec<usize>,
    right: &Word,
    g: Vec<usize>,
) -> PyResult<(Word, Vec<usize>, Vec<usize>, bool)> {
    let span = build_span(base, left, f, right, g)?;
    let am = amalgamate(&span)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let strong = verify_amalgam(&span, &am).strong;
    Ok((
        Word { inner: am.result().clone() },
        am.j1.positions.clone(),
        am.j2.positions.clone(),
        strong,
    ))
}

/// Result word plus the two witness position lists.
type AmalgamParts = (Word, Vec<usize>, Vec<usize>);

/// Smallest amalgam of the span up to `max_size` elements, or `None`.
#[pyfunction]
#[pyo3(name = "search_amalgam", signature = (base, left, f, right, g, max_size = 8))]
fn search_amalgam_py(
    base: &Word,
    left: &Word,
    f: Vec<usize>,
    right: &Word,
    g: Vec<usize>,
    max_size: usize,
) -> PyResult<Option<AmalgamParts>> {
    let span = build_span(base, left, f, right, g)?;
    let found = search_amalgam(&span, max_size).map_err(cap_err)?;
    Ok(found.map(|am| {
        (
            Word { inner: am.result().clone() },
            am.j1.positions.clone(),
            am.j2.positions.clone(),
        )
    }))
}

/// `"yes"` or `"no"`: whether the generated variety amalgamates.
#[pyfunction]
#[pyo3(name = "variety_status")]
fn variety_status_py(generators: Vec<Word>) -> PyResult<String> {
    let gens: Vec<SumWord> = generators.into_iter().map(|w| w.inner).collect();
    Ok(amalgamation_status(&gens).map_err(cap_err)?.to_string())
}

#[pymodule]
fn lmonoid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Word>()?;
    m.add_class::<Algebra>()?;
    m.add_function(wrap_pyfunction!(enumerate_words_py, m)?)?;
    m.add_function(wrap_pyfunction!(count_all, m)?)?;
    m.add_function(wrap_pyfunction!(count_sdi, m)?)?;
    m.add_function(wrap_pyfunction!(count_commutative, m)?)?;
    m.add_function(wrap_pyfunction!(member_py, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_py, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_dual_py, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_py, m)?)?;
    m.add_function(wrap_pyfunction!(amalgamate_py, m)?)?;
    m.add_function(wrap_pyfunction!(search_amalgam_py, m)?)?;
    m.add_function(wrap_pyfunction!(variety_status_py, m)?)?;
    Ok(())
}
