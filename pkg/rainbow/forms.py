from fractions import Fraction

from django import forms
from django.core.exceptions import ValidationError

from .utils import RATIONAL_PATTERN


class RationalField(forms.CharField):
    """Accepts "p" or "p/q" and cleans to a Fraction."""

    def to_python(self, value):
        value = super().to_python(value)
        if value in self.empty_values:
            return None
        if not RATIONAL_PATTERN.fullmatch(value):
            raise ValidationError("Enter a rational number like 3 or 1/100.")
        numerator, _, denominator = value.partition("/")
        if denominator and int(denominator) == 0:
            raise ValidationError("The denominator must be positive.")
        return Fraction(int(numerator), int(denominator or 1))


class JobsMixin(forms.Form):
    jobs = forms.IntegerField(label="Worker processes", min_value=1, required=False)


class RainbowNumberForm(JobsMixin):
    kmax = forms.IntegerField(label="Largest k", min_value=1)
    nmax = forms.IntegerField(label="Largest n", min_value=1)


class ColorForm(forms.Form):
    N = forms.IntegerField(label="Interval length", min_value=1)
    k = forms.IntegerField(label="Colours", min_value=1)

    def clean(self):
        cleaned = super().clean()
        size, k = cleaned.get("N"), cleaned.get("k")
        if size is not None and k is not None and k > size:
            raise ValidationError("k cannot exceed N for a surjective colouring.")
        return cleaned


class EnumerateForm(ColorForm):
    limit = forms.IntegerField(label="Colourings to list", min_value=0, required=False)

    def clean(self):
        cleaned = super().clean()
        size, k = cleaned.get("N"), cleaned.get("k")
        if size is not None and k is not None and size % k:
            raise ValidationError("k must divide N for an equinumerous colouring.")
        return cleaned


class RobustExperimentForm(JobsMixin):
    k = forms.IntegerField(label="Colours", min_value=1)
    N = forms.IntegerField(label="Interval length", min_value=1)
    eps = RationalField(label="Epsilon", required=False)
    eps_ratio = RationalField(label="Epsilon as a fraction of C", required=False)
    trials = forms.IntegerField(label="Trials", min_value=0)
    seed = forms.IntegerField(label="Seed", min_value=0, required=False)

    def clean(self):
        cleaned = super().clean()
        eps, ratio = cleaned.get("eps"), cleaned.get("eps_ratio")
        if (eps is None) == (ratio is None):
            raise ValidationError("Give exactly one of --eps and --eps-ratio.")
        for name, value in (("eps", eps), ("eps_ratio", ratio)):
            if value is not None and value <= 0:
                self.add_error(name, "Epsilon must be positive.")
        return cleaned


class EhrhartForm(forms.Form):
    tmax = forms.IntegerField(label="Largest dilation", min_value=0, required=False)


class FibonacciForm(forms.Form):
    d = forms.IntegerField(label="Sequence length", min_value=4)
    tmax = forms.IntegerField(label="Largest dilation", min_value=1)


class SelftestForm(forms.Form):
    seed = forms.IntegerField(label="Seed", min_value=0, required=False)
