# coding: utf-8
#

from foldcat._builder import CertificateBuilder, cancel_cert, chain_cert, lemma_a_cert
from foldcat._category import (CategoryPresentation, FreeCategory, Quiver, TwoCategoryPresentation,
                               emit_category, is_isomorphic_category, parse_category, parse_graph,
                               parse_two_category)
from foldcat._presentation import (Presentation, emit_presentation, parse_presentation, restrict_window,
                                   switchback, truncate_oracle, validate_presentation)
from foldcat._proto import *
from foldcat._version import __version__
from foldcat._view import FiniteView, FoldedView, GenerativeView
from foldcat.constructions import (MUTATION_CATALOGUE, Mutation, MutationKind, extract_category,
                                   free_strict_on_graph, from_category, from_strict_2category,
                                   mutate_presentation)
from foldcat.derived import (ArrowCategory, PowerStructure, arrow_category, cell_levels, check_globular,
                             check_power_membership, classify_shape, deep_composable, discreteness,
                             export_view, identity_functor, iterated_boundary, power_structure,
                             validate_functor)
from foldcat.equivalence import (EquivRelation, Link, brute_force_equiv, cert_from_json, cert_to_json,
                                 decide_equiv, extract_cert, from_arrow_category, pair_cert, push_cert,
                                 refl_cert, sym_cert, to_arrow_category, transform_cert, verify_cert)
from foldcat.errors import *
from foldcat.weak import (check_coherence, contract_path, mu_apply, mu_functor, mu_object, theta_lookup,
                          validate_mu)
