from fractions import Fraction
from django.test import SimpleTestCase
from Simplicial.presets import fixture
from Deligne.assembly import Cell
from Forms.problem_forms import ProblemForm, parse_rational, parse_window, parse_cochain




KLEIN = {
    'elements': ['e', 'a', 'b', 'ab'],
    'table': [
        ['e', 'a', 'b', 'ab'],
        ['a', 'e', 'ab', 'b'],
        ['b', 'ab', 'e', 'a'],
        ['ab', 'b', 'a', 'e'],
    ],
}


def problem(**fields):
    data = {'group': 'cyclic:3', 'complex': 'point', 'task': 'compute', 'parameters': {'N': 1, 'm': 1}}
    data.update(fields)
    return data


def messages(form, field):
    return ' '.join(form.errors.get(field, []))




class ProblemFormTests(SimpleTestCase):

    def test_presets(self):
        form = ProblemForm(problem())
        self.assertTrue(form.is_valid(), form.errors)
        cleaned = form.cleaned_data['problem']
        self.assertEqual(cleaned.group.order, 3)
        self.assertEqual(cleaned.space.n_vertices, 1)
        self.assertEqual(cleaned.parameters, {'N': 1, 'window': (1, 1)})


    def test_compute_defaults_to_degree_N(self):
        form = ProblemForm(problem(parameters={'N': 2}))
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['problem'].parameters['window'], (2, 2))


    def test_explicit_group_complex_and_action(self):
        form = ProblemForm(problem(
            group=KLEIN,
            complex={'vertices': ['u', 'v', 'w', 'x'], 'facets': [['u', 'v'], ['v', 'w'], ['w', 'x'], ['x', 'u']]},
            action={'generators': {'a': ['w', 'x', 'u', 'v'], 'b': ['u', 'v', 'w', 'x']}},
        ))
        self.assertTrue(form.is_valid(), form.errors)
        action = form.cleaned_data['problem'].action
        self.assertEqual(action.group.order, 4)
        self.assertEqual(action.perms[1], (2, 3, 0, 1))
        self.assertEqual(action.perms[3], (2, 3, 0, 1))


    def test_action_preset(self):
        form = ProblemForm(problem(group='cyclic:2', complex='circle:4', action='rotation'))
        self.assertTrue(form.is_valid(), form.errors)
        self.assertTrue(form.cleaned_data['problem'].action.is_free())


    def test_malformed_facets_name_their_path(self):
        form = ProblemForm(problem(complex={'facets': [['a', 'b'], []]}))
        self.assertFalse(form.is_valid())
        self.assertIn('complex.facets[1]', messages(form, 'complex'))


    def test_unknown_vertex(self):
        form = ProblemForm(problem(complex={'vertices': ['a', 'b'], 'facets': [['a', 'c']]}))
        self.assertFalse(form.is_valid())
        self.assertIn("complex.facets[0]: unknown vertex 'c'", messages(form, 'complex'))


    def test_non_associative_table(self):
        table = [['e', 'a', 'b'], ['a', 'b', 'e'], ['b', 'a', 'e']]
        form = ProblemForm(problem(group={'elements': ['e', 'a', 'b'], 'table': table}))
        self.assertFalse(form.is_valid())
        self.assertIn('group', form.errors)


    def test_unknown_group_element_in_table(self):
        form = ProblemForm(problem(group={'elements': ['e', 'a'], 'table': [['e', 'a'], ['a', 'z']]}))
        self.assertFalse(form.is_valid())
        self.assertIn('group.table[1][1]', messages(form, 'group'))


    def test_generators_must_define_a_homomorphism(self):
        form = ProblemForm(problem(
            group='cyclic:2',
            complex='circle:3',
            action={'generators': {'1': ['b', 'c', 'a']}},
        ))
        self.assertFalse(form.is_valid())
        self.assertIn('homomorphism', messages(form, 'action'))


    def test_generator_images_cover_every_vertex(self):
        form = ProblemForm(problem(group='cyclic:2', complex='circle:4', action={'generators': {'1': ['c', 'd']}}))
        self.assertFalse(form.is_valid())
        self.assertIn('action.generators.1', messages(form, 'action'))


    def test_unknown_task(self):
        form = ProblemForm(problem(task='plot'))
        self.assertFalse(form.is_valid())
        self.assertIn('task: plot', messages(form, 'task'))


    def test_parameters_are_checked_per_task(self):
        form = ProblemForm(problem(task='verify', parameters={'N': 1, 'sequence': 'spectral', 'colour': 1}))
        self.assertFalse(form.is_valid())
        text = messages(form, 'parameters')
        self.assertIn('parameters.sequence', text)
        self.assertIn('parameters.colour: not a parameter of task verify', text)
        form = ProblemForm(problem(parameters={'N': -1}))
        self.assertFalse(form.is_valid())
        self.assertIn('parameters.N', messages(form, 'parameters'))


    def test_cocycle_payload(self):
        form = ProblemForm(problem(task='classify', parameters={'kind': 'bundle', 'cocycle': [
            {'level': 1, 'copy': ['1'], 'index': ['p'], 'slot': 1, 'simplex': ['p'], 'value': '1/3'},
            {'level': 2, 'copy': ['1', '2'], 'index': ['p'], 'slot': 0, 'value': 1},
        ]}))
        self.assertTrue(form.is_valid(), form.errors)
        cochain = form.cleaned_data['problem'].parameters['cocycle']
        self.assertEqual(cochain.degree, 2)
        self.assertEqual(cochain.entries[Cell(1, (1,), (0,), 1, (0,))], Fraction(1, 3))
        self.assertEqual(cochain.entries[Cell(2, (1, 2), (0,), 0, ())], 1)


    def test_cocycle_payload_errors(self):
        entries = [
            {'level': 1, 'copy': ['1'], 'index': ['p'], 'slot': 1, 'simplex': [], 'value': 0.5},
            {'level': 1, 'copy': [], 'index': ['p'], 'slot': 1, 'value': '1/3'},
            {'level': 0, 'copy': [], 'index': ['p'], 'slot': 2, 'simplex': [], 'value': '1'},
            {'level': 1, 'copy': ['7'], 'index': ['p'], 'slot': 1, 'value': '1'},
            {'copy': [], 'index': ['p'], 'slot': 1},
        ]
        form = ProblemForm(problem(task='classify', parameters={'kind': 'bundle', 'cocycle': entries}))
        self.assertFalse(form.is_valid())
        text = messages(form, 'parameters')
        self.assertIn("parameters.cocycle[0]: write 0.5 as a 'p/q' string", text)
        self.assertIn('parameters.cocycle[1].copy', text)
        self.assertIn('parameters.cocycle[2].simplex', text)
        self.assertIn("parameters.cocycle[3]: unknown group element '7'", text)
        self.assertIn('parameters.cocycle[4]: missing level, value', text)


    def test_non_integral_constant_is_rejected(self):
        _, errors = parse_cochain(
            [{'level': 2, 'copy': ['1', '1'], 'index': ['p'], 'slot': 0, 'value': '1/2'}],
            fixture('cyclic:3', 'point'), 2, 'cocycle',
        )
        self.assertEqual(len(errors), 1)
        self.assertTrue(errors[0].startswith('cocycle: Non-integral constant'))


    def test_twist_gamma(self):
        form = ProblemForm(problem(group='klein4', task='twist', parameters={'gamma': {'a,b': '1/2', 'ab,ab': '1/2'}}))
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['problem'].parameters['gamma'], {(1, 2): Fraction(1, 2), (3, 3): Fraction(1, 2)})
        form = ProblemForm(problem(group='klein4', task='twist', parameters={'gamma': {'a': '1/2'}}))
        self.assertFalse(form.is_valid())
        self.assertIn('parameters.gamma.a', messages(form, 'parameters'))


    def test_rationals_and_windows(self):
        self.assertEqual(parse_rational('2/6'), Fraction(1, 3))
        self.assertEqual(parse_rational(4), 4)
        with self.assertRaises(ValueError):
            parse_rational(0.25)
        self.assertEqual(parse_window('0:2'), (0, 2))
        self.assertEqual(parse_window([1, 1]), (1, 1))
        with self.assertRaises(ValueError):
            parse_window('2:1')
