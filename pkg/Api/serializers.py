import logging
from fractions import Fraction
from rest_framework import serializers
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer
from Algebra.modules import MixedModule, Generator, ClassCoordinates
from Algebra.cohomology import NoSolution, Witness, Certificate
from Simplicial.cochains import SimplicialCochain
from Deligne.assembly import TripleCochain
from Geometry.cocycles import GeomCocycle
from Geometry.classify import ClassHandle




logger = logging.getLogger(__name__)




def rational(value):
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _labels(space, simplex):
    return [space.labels[v] for v in simplex]




class CochainSerializer(serializers.BaseSerializer):

    """
    Sparse triple cochains as sorted payload entries {level, copy, index, slot, simplex, value},
    the same shape the problem file accepts. Needs the action in the context for labels.
    """

    def to_representation(self, instance):
        action = self.context['action']
        group, space = action.group, action.space
        entries = []
        for cell, value in sorted(instance.entries.items()):
            entries.append({
                'level': cell.level,
                'copy': [group.labels[g] for g in cell.copy],
                'index': _labels(space, cell.index),
                'slot': cell.slot,
                'simplex': _labels(space, cell.simplex),
                'value': rational(value),
            })
        return entries




class ResultField(serializers.Field):

    """ Renders engine values (modules, rationals, cochains, witnesses ...) into plain JSON. """

    def __init__(self, **kwargs):
        kwargs['read_only'] = True
        super().__init__(**kwargs)


    def to_representation(self, value):
        return canonical(value, self.context.get('action'))




def canonical(value, action=None):

    """
    Plain JSON data with every mapping ordered by key, so identical reports render to
    identical bytes.
    """

    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, MixedModule):
        return str(value)
    if isinstance(value, Generator):
        return {'name': value.name, 'kind': value.kind, 'order': value.order}
    if isinstance(value, ClassHandle):
        return value.as_dict()
    if isinstance(value, ClassCoordinates):
        return [rational(v) for v in value.values()]
    if isinstance(value, GeomCocycle):
        value = value.cochain
    if isinstance(value, TripleCochain):
        return CochainSerializer(value, context={'action': action}).data
    if isinstance(value, SimplicialCochain):
        return {
            '-'.join(map(str, _labels(action.space, simplex))): rational(v)
            for simplex, v in sorted(value.values.items())
        }
    if isinstance(value, Witness):
        return {'witness': canonical(value.cochain, action)}
    if isinstance(value, Certificate):
        return {'certificate': {'generator': value.generator, 'coefficient': rational(value.coefficient)}}
    if isinstance(value, NoSolution):
        return {'no_solution': {'reason': value.reason, 'value': rational(value.value)}}
    if isinstance(value, dict):
        return {str(k): canonical(v, action) for k, v in sorted(value.items(), key=lambda item: str(item[0]))}
    if isinstance(value, (set, frozenset)):
        return sorted((canonical(v, action) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [canonical(v, action) for v in value]
    raise TypeError(f"Cannot render {type(value).__name__} in a report")




class ProblemSerializer(serializers.BaseSerializer):

    """
    A validated Problem back to the file format, with the group, complex and action written
    out explicitly. Parsing the output again gives the same problem.
    """

    def to_representation(self, instance):
        group, space, action = instance.group, instance.space, instance.action
        parameters = {}
        for key, value in instance.parameters.items():
            if key == 'gamma':
                value = {f"{group.labels[g]},{group.labels[h]}": rational(x) for (g, h), x in value.items()}
            elif key == 'window':
                value = list(value)
            parameters[key] = canonical(value, action)
        return canonical({
            'group': {
                'name': group.name,
                'elements': list(group.labels),
                'table': [[group.labels[x] for x in row] for row in group.table],
            },
            'complex': {
                'vertices': list(space.labels),
                'facets': [_labels(space, facet) for facet in space.facets],
            },
            'action': {
                'generators': {
                    group.labels[g]: [space.labels[v] for v in action.perms[g]]
                    for g in group.elements if g != group.identity
                },
            },
            'task': instance.task,
            'parameters': parameters,
        })




class ReportSerializer(serializers.Serializer):
    problem = ResultField(required=False)
    task = serializers.CharField(read_only=True)
    results = ResultField()
    conventions = ResultField()
    timing = ResultField()
    verified = serializers.BooleanField(read_only=True)

    def to_representation(self, instance):
        return canonical(dict(super().to_representation(instance)))




def read_problem(stream):

    """
    Parses a problem file.

    Raises:
    rest_framework.exceptions.ParseError: if the stream is not JSON.
    """

    return JSONParser().parse(stream)


def render_report(report, action=None):
    data = ReportSerializer(report, context={'action': action}).data
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b"\n"
