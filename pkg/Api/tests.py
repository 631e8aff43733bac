import json
from io import BytesIO
from fractions import Fraction
from django.test import SimpleTestCase
from rest_framework.exceptions import ParseError
from Algebra.modules import MixedModule
from Algebra.cohomology import Certificate
from Simplicial.presets import fixture
from Geometry.cocycles import group_cochain_cocycle
from Forms.problem_forms import ProblemForm, parse_cochain
from Api.serializers import CochainSerializer, ProblemSerializer, canonical, read_problem, render_report




def character(action, k):
    n = action.group.order
    return group_cochain_cocycle('bundle', action, {(g,): Fraction(g * k % n, n) for g in action.group.elements})


def parsed(data):
    form = ProblemForm(data)
    assert form.is_valid(), form.errors
    return form.cleaned_data['problem']




class CanonicalTests(SimpleTestCase):

    def test_values(self):
        self.assertEqual(canonical(Fraction(1, 2)), '1/2')
        self.assertEqual(canonical(Fraction(6, 3)), '2')
        self.assertEqual(canonical(MixedModule(rank_qz=1, torsion=(2,))), 'Q/Z + Z/2')
        self.assertEqual(canonical(Certificate('g0', Fraction(1, 3))), {'certificate': {'generator': 'g0', 'coefficient': '1/3'}})
        self.assertEqual(canonical((1, [True, None])), [1, [True, None]])


    def test_mappings_are_ordered(self):
        data = canonical({'b': 1, 'a': {2: 'x', 1: 'y'}})
        self.assertEqual(list(data), ['a', 'b'])
        self.assertEqual(list(data['a']), ['1', '2'])


    def test_unknown_values_are_refused(self):
        with self.assertRaises(TypeError):
            canonical(object())




class CochainSerializerTests(SimpleTestCase):

    def test_entries_use_labels(self):
        action = fixture('cyclic:3', 'point')
        entries = CochainSerializer(character(action, 1).cochain, context={'action': action}).data
        first = [e for e in entries if e['level'] == 1][0]
        self.assertEqual(set(first), {'level', 'copy', 'index', 'slot', 'simplex', 'value'})
        self.assertEqual(first['index'], ['p'])
        self.assertEqual(first['copy'], ['1'])
        self.assertEqual(first['value'], '1/3')


    def test_entries_parse_back(self):
        action = fixture('cyclic:3', 'point')
        cocycle = character(action, 2).cochain
        entries = CochainSerializer(cocycle, context={'action': action}).data
        again, errors = parse_cochain(entries, action, 2, 'cocycle')
        self.assertEqual(errors, [])
        self.assertEqual(again, cocycle)




class ProblemSerializerTests(SimpleTestCase):

    def test_preset_problem_written_out(self):
        problem = parsed({'group': 'cyclic:2', 'complex': 'circle:4', 'action': 'rotation', 'task': 'verify',
                          'parameters': {'N': 1, 'sequence': 'integral', 'window': '0:1'}})
        data = ProblemSerializer(problem).data
        self.assertEqual(data['group']['elements'], ['0', '1'])
        self.assertEqual(data['complex']['vertices'], ['a', 'b', 'c', 'd'])
        self.assertEqual(data['action'], {'generators': {'1': ['c', 'd', 'a', 'b']}})
        self.assertEqual(data['parameters'], {'N': 1, 'sequence': 'integral', 'window': [0, 1]})


    def test_parsing_the_written_problem_gives_the_same_problem(self):
        action = fixture('klein4', 'point')
        first = parsed({'group': 'klein4', 'complex': 'point', 'task': 'twist', 'parameters': {
            'gamma': {'a,b': '1/2'},
            'cocycle': CochainSerializer(group_cochain_cocycle('gerbe', action, {}).cochain, context={'action': action}).data,
        }})
        second = parsed(ProblemSerializer(first).data)
        self.assertEqual(second.group.table, first.group.table)
        self.assertEqual(second.space.facets, first.space.facets)
        self.assertEqual(second.action.perms, first.action.perms)
        self.assertEqual(second.task, first.task)
        self.assertEqual(second.parameters, first.parameters)
        self.assertEqual(ProblemSerializer(second).data, ProblemSerializer(first).data)




class RenderTests(SimpleTestCase):

    def report(self):
        return {
            'task': 'compute',
            'results': {'N': 1, 'cohomology': {1: {'group': MixedModule(torsion=(3,)), 'generators': []}}},
            'conventions': {'z': 'last', 'a': 'first'},
            'timing': {},
            'verified': True,
        }


    def test_render_is_stable(self):
        first = render_report(self.report())
        self.assertEqual(first, render_report(self.report()))
        data = json.loads(first)
        self.assertEqual(list(data), sorted(data))
        self.assertEqual(list(data['conventions']), ['a', 'z'])
        self.assertEqual(data['results']['cohomology']['1']['group'], 'Z/3')
        self.assertTrue(first.endswith(b'\n'))


    def test_read_problem(self):
        self.assertEqual(read_problem(BytesIO(b'{"task": "compute"}')), {'task': 'compute'})
        with self.assertRaises(ParseError):
            read_problem(BytesIO(b'{"task": '))
