"""

.. module:: symbolic
	:platform: Unix
	:synopsis: Exact rational combinatorics of the small angle expansion of the travel time near a convex boundary direction


"""

from __future__ import division

from fractions import Fraction
from math import factorial

from ..utils.exceptions import ConvexityError

##########################################################
##################SymbolicTerm class#####################
##########################################################

class SymbolicTerm(object):

	"""
	Term coeff K^d R^{j,k}: R^{j,k} stands for (v^n)^j times a remainder carrying normal derivatives of the metric up to order k

	"""

	__slots__ = ("j","k","coeff","d")

	def __init__(self,j,k,coeff,d):

		assert j>=0 and k>=1 and d>=0,"Invalid term indices j={0} k={1} d={2}".format(j,k,d)

		object.__setattr__(self,"j",j)
		object.__setattr__(self,"k",k)
		object.__setattr__(self,"coeff",Fraction(coeff))
		object.__setattr__(self,"d",d)

	def __setattr__(self,name,value):
		raise AttributeError("SymbolicTerm instances are immutable")

	@property
	def key(self):
		return (self.j,self.k,self.d)

	def __eq__(self,other):
		return isinstance(other,SymbolicTerm) and self.key==other.key and self.coeff==other.coeff

	def __ne__(self,other):
		return not self.__eq__(other)

	def __hash__(self):
		return hash(self.key+(self.coeff,))

	def __repr__(self):
		return "{0} K^{1} R^{{{2},{3}}}".format(self.coeff,self.d,self.j,self.k)

	def apply(self):

		"""
		One application of V(R^{j,k}) = jK R^{j-1,k} + R^{j+1,k+1}

		"""

		out = [SymbolicTerm(self.j+1,self.k+1,self.coeff,self.d)]
		if self.j>0:
			out.append(SymbolicTerm(self.j-1,self.k,self.coeff*self.j,self.d+1))

		return out


def collect(terms):

	"""
	Merge terms with the same (j,k,d), dropping vanishing coefficients; sorted by decreasing j

	"""

	merged = dict()
	for t in terms:
		merged[t.key] = merged.get(t.key,Fraction(0)) + t.coeff

	return sorted([SymbolicTerm(j,k,c,d) for (j,k,d),c in merged.items() if c!=0],key=lambda t:(-t.j,t.k))

##########################################################
##################Expansion terms########################
##########################################################

def expansion_recurrence(l):

	"""
	Apply the rule V l times to R^{0,1}

	:param l: number of applications
	:type l: int.

	:returns: list of :py:class:`SymbolicTerm`

	"""

	assert l>=0,"l must be non negative!"

	terms = [SymbolicTerm(0,1,1,0)]
	for _ in range(l):
		terms = collect([u for t in terms for u in t.apply()])

	return terms


def closed_form_terms(l):

	"""
	V^l(R^{0,1}) = sum_d l!/((l-2d)! d! 2^d) K^d R^{l-2d,1+l-d}

	"""

	assert l>=0,"l must be non negative!"
	return collect([SymbolicTerm(l-2*d,1+l-d,Fraction(factorial(l),factorial(l-2*d)*factorial(d)*2**d),d) for d in range(l//2+1)])


def series_sum(m):

	"""
	S_m = sum_{j=0}^{m-1} (-1)^j/((m+j)(m+j+1)(m-j-1)! j!), exactly

	:rtype: :py:class:`fractions.Fraction`

	"""

	assert m>=1,"m must be at least 1!"
	return sum((Fraction((-1)**j,(m+j)*(m+j+1)*factorial(m-j-1)*factorial(j)) for j in range(m)),Fraction(0))

##########################################################
##############Coefficients of the jet####################
##########################################################

class KMonomial(object):

	"""
	Exact monomial coeff K^power

	"""

	def __init__(self,coeff,power):
		self.coeff = Fraction(coeff)
		self.power = power

	def __call__(self,K):
		if K==0 and self.power<0:
			raise ConvexityError("K=0: the probe direction is not strictly convex")
		if isinstance(K,(int,Fraction)):
			return self.coeff*Fraction(K)**self.power
		return float(self.coeff)*K**self.power

	def __add__(self,other):
		assert self.power==other.power,"Only monomials of the same degree can be added"
		return KMonomial(self.coeff+other.coeff,self.power)

	def __eq__(self,other):
		return isinstance(other,KMonomial) and self.coeff==other.coeff and self.power==other.power

	def __ne__(self,other):
		return not self.__eq__(other)

	def __repr__(self):
		return "{0} K^{1}".format(self.coeff,self.power)


def jet_monomial(m):

	"""
	1/2 (-2K^{-1})^{m+1} m!/(2m)! as a monomial in K

	"""

	assert m>=1,"m must be at least 1!"
	return KMonomial(Fraction((-2)**(m+1),2)*Fraction(factorial(m),factorial(2*m)),-(m+1))


def jet_coefficient(m,K):

	"""
	Coefficient of the m-th normal derivative pairing d_n^m g(v,v) in the eps^{2m-1} term of tau(eps)

	:param K: 1/2 d_n g(v,v), exact rational or float
	:type K: :py:class:`fractions.Fraction` or float.

	:raises: :py:class:`ConvexityError` for K=0

	"""

	return jet_monomial(m)(K)


def assembled_coefficient(m):

	"""
	Coefficient of d_n^m g(v,v) assembled from the expansion terms: sum_j C_j/(m+j+1)! (-2K^{-1})^{m+j+1}, with C_j one half of the K^j coefficient of V^{m+j-1}(R^{0,1})

	"""

	assert m>=1,"m must be at least 1!"

	total = KMonomial(0,-(m+1))
	for j in range(m):

		l = m+j-1
		term = [t for t in expansion_recurrence(l) if t.d==j]
		assert len(term)==1,"Expected a single K^{0} term at l={1}".format(j,l)

		C = Fraction(1,2)*term[0].coeff
		total = total + KMonomial(C*Fraction((-2)**(m+j+1),factorial(m+j+1)),j-(m+j+1))

	return total
