// Wire types for the four recommendation-service endpoints.

export interface Vocabulary {
  brands: string[];
  colors: string[];
  bodyTypes: string[];
  seats: number[];
  profiles: string[];
  priceRange: { min: number; max: number } | null;
  mileageRange: { min: number; max: number } | null;
}

export interface ProfileDocument {
  userId: string;
  preferences: {
    seats?: number;
    vehicleType?: string;
    brand?: string;
    color?: string[];
    maxMileage?: number;
    maxBudget?: number;
    profile?: string;
  };
  importance: string[];
}

export interface ItemAttributes {
  name: string | null;
  price: number | null;
  bodyType: string | null;
  seats: number | null;
  modelYear: number | null;
  brand: string | null;
  mileage: number | null;
  color: string | null;
}

export interface Recommendation {
  item: string;
  attributes: ItemAttributes;
}

export interface Diagnosis {
  name: string;
  removed: string[];
  solutionCount: number;
}

export interface RecommendResponse {
  recommendations: Recommendation[];
  appliedDelta: Diagnosis | null;
  alternatives: Diagnosis[];
}

export interface DiagnoseResponse {
  delta: Diagnosis;
  solutions: Recommendation[];
  solutionCount: number;
}

export interface FieldError {
  field: string;
  reason: string;
}
