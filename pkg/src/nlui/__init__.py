"""Natural-language control for action-based applications.

English sentences are parsed with a categorial grammar into terms of a
typed action calculus, then evaluated step by step against an
application connected through a small interface of constants,
predicates and actions.
"""
from .calculus import (
    ACT, BOOL, OBJ, Act, ActCall, App, Bool, BoolLit, Cond, ConstCall,
    Expr, Fault, Fun, Lambda, Obj, ObjVal, PredCall, Seq, Skip, Type,
    TypeCheckError, Var, alpha_equivalent, canonical, free_vars, is_pure,
    is_value, is_wellformed, substitute, type_of,
)
from .grammar import (
    AmbiguousParse, Base, Category, Derivation, Lexicon, LexiconEntry,
    NoParse, Over, ParseFailure, Sequent, Under, UnknownVocabulary,
    assign_type, beta_normalize, check_admissible_typing,
    derivation_conforms, derive, format_category, load_lexicon, parse,
    parse_category, respects_imperative_structure, segmentations,
)
from .interface import (
    ApplicationConnector, GuardFailure, InterfaceDescriptor,
    ModelApplication, ObjectRef, Violation, dump_model, guard_check,
    load_model, model_as_connector, model_step_action,
    model_step_constant, model_step_predicate, validate_descriptor,
    validate_model,
)
from .interpreter import (
    FuelExhausted, Step, StepTrace, StuckTerm, check_preservation,
    evaluate, render_trace, step,
)
from .session import CommandResult, Fact, Session, repl, tokenize_sentence
from .syntax import format_term, format_type, parse_term, parse_type
from .toyblocks import (
    ToyBlocksWorld, toyblocks_descriptor, toyblocks_lexicon,
    toyblocks_live_connector, toyblocks_model, world_for_state,
)

__all__ = [name for name in dir() if not name.startswith("_")]
